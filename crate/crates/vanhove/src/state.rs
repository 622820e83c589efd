//! Van Hove states ρ = ρ̂ + ρ_r.
//!
//! A state pairs with algebra elements by parts: the δ-parts contract
//! against each other and the regular kernels contract with the index
//! transposition ρ_r(Ω,Ω′)·a_r(Ω′,Ω), so cross terms vanish identically.
//! Construction validates the state conditions — real nonnegative ρ̂
//! (conditions 2′/4′), hermitian ρ_r (3′), positive kernel ρ_r (5′) — and
//! flags normalization (6′).
//!
//! "Positive kernel" is interpreted as positive semidefiniteness of the
//! weighted matrix [√wᵢ ρ_r(Ωᵢ,Ωⱼ) √wⱼ]: that is the discretization of
//! ∬ f̄ ρ_r f ≥ 0 and implies ρ(b*b) ≥ 0 for regular-only b.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, VanHoveElement};
use crate::grid::{GridError, SampledFunction, SpectralGrid};

#[derive(Debug, Error)]
pub enum StateError {
    #[error("diagonal part must be real-valued (condition 2'): max imaginary part {max_imag:e}")]
    DiagonalNotReal { max_imag: f64 },
    #[error("diagonal part must be nonnegative (condition 4'): value {value:e} at node {node}")]
    DiagonalNegative { value: f64, node: usize },
    #[error("regular kernel must be hermitian (condition 3'): max deviation {deviation:e}")]
    KernelNotHermitian { deviation: f64 },
    #[error(
        "regular kernel must be a positive kernel (condition 5'): smallest weighted eigenvalue {eigenvalue:e}"
    )]
    KernelNotPositive { eigenvalue: f64 },
    #[error("state and operand live on different grids")]
    GridMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Tolerances for the state conditions.
#[derive(Debug, Clone, Copy)]
pub struct StateTolerances {
    /// Hermiticity / realness / normalization checks (rounding-dominated).
    pub hermiticity: f64,
    pub normalization: f64,
    /// Floor on the smallest weighted-kernel eigenvalue (eigen-solver bound).
    pub eigenvalue_floor: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            normalization: 1e-10,
            eigenvalue_floor: 1e-8,
        }
    }
}

/// A validated van Hove state.
#[derive(Debug, Clone)]
pub struct VanHoveState {
    grid: Arc<SpectralGrid>,
    diag: DVector<f64>,
    reg: DMatrix<Complex64>,
    normalized: bool,
}

impl VanHoveState {
    /// Validate the state conditions and build the state. The `normalized`
    /// flag records whether ∫ρ̂ dμ = 1 within tolerance.
    pub fn new(
        diag: &SampledFunction,
        reg: DMatrix<Complex64>,
        tol: &StateTolerances,
    ) -> Result<Self, StateError> {
        let grid = Arc::clone(diag.grid());
        let n = grid.len();
        if reg.nrows() != n || reg.ncols() != n {
            return Err(AlgebraError::KernelShape {
                rows: reg.nrows(),
                cols: reg.ncols(),
                expected: n,
            }
            .into());
        }

        let max_imag = diag.max_imag();
        if max_imag > tol.hermiticity {
            return Err(StateError::DiagonalNotReal { max_imag });
        }
        let diag_re = DVector::from_iterator(n, diag.values().iter().map(|z| z.re));
        for (i, &v) in diag_re.iter().enumerate() {
            if v < -tol.hermiticity {
                return Err(StateError::DiagonalNegative { value: v, node: i });
            }
        }

        let deviation = hermiticity_deviation(&reg);
        if deviation > tol.hermiticity {
            return Err(StateError::KernelNotHermitian { deviation });
        }

        let eigenvalue = min_weighted_eigenvalue(&grid, &reg);
        if eigenvalue < -tol.eigenvalue_floor {
            return Err(StateError::KernelNotPositive { eigenvalue });
        }

        let trace: f64 = grid
            .weights()
            .iter()
            .zip(diag_re.iter())
            .map(|(&w, &d)| w * d)
            .sum();
        let normalized = (trace - 1.0).abs() <= tol.normalization;

        Ok(Self {
            grid,
            diag: diag_re,
            reg,
            normalized,
        })
    }

    /// Diagonal state ρ̂ with no regular part.
    pub fn diagonal(diag: &SampledFunction, tol: &StateTolerances) -> Result<Self, StateError> {
        let n = diag.grid().len();
        Self::new(diag, DMatrix::zeros(n, n), tol)
    }

    /// Test-only constructor that skips validation (for probing how the
    /// report paths behave on deliberately broken states).
    #[cfg(test)]
    pub(crate) fn from_parts_unchecked(
        grid: Arc<SpectralGrid>,
        diag: DVector<f64>,
        reg: DMatrix<Complex64>,
        normalized: bool,
    ) -> Self {
        Self {
            grid,
            diag,
            reg,
            normalized,
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// ρ̂ samples (real).
    pub fn diag(&self) -> &DVector<f64> {
        &self.diag
    }

    /// ρ_r kernel.
    pub fn reg(&self) -> &DMatrix<Complex64> {
        &self.reg
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub(crate) fn set_reg(&mut self, reg: DMatrix<Complex64>) {
        debug_assert_eq!(reg.nrows(), self.grid.len());
        self.reg = reg;
    }

    /// ρ(a) = ρ̂(â) + ρ_r(a_r):
    /// ∑ᵢ wᵢ ρ̂(Ωᵢ) â(Ωᵢ) + ∑ᵢⱼ wᵢwⱼ ρ_r(Ωᵢ,Ωⱼ) a_r(Ωⱼ,Ωᵢ).
    pub fn expectation(&self, a: &VanHoveElement) -> Result<Complex64, StateError> {
        if a.grid().id() != self.grid.id() {
            return Err(StateError::GridMismatch);
        }
        Ok(self.diag_pairing(a) + self.reg_pairing(a))
    }

    /// The δ-against-δ half of the pairing, ∑ wᵢ ρ̂ᵢ âᵢ.
    pub fn diag_pairing(&self, a: &VanHoveElement) -> Complex64 {
        self.grid
            .weights()
            .iter()
            .zip(self.diag.iter())
            .zip(a.diag().iter())
            .map(|((&w, &d), &ad)| w * d * ad)
            .sum()
    }

    /// The regular-against-regular half, with the index transposition
    /// ρ_r(Ω,Ω′)·a_r(Ω′,Ω).
    pub fn reg_pairing(&self, a: &VanHoveElement) -> Complex64 {
        let w = self.grid.weights();
        let n = self.grid.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let wi = w[i];
            for (j, &wj) in w.iter().enumerate() {
                acc += wi * wj * self.reg[(i, j)] * a.reg()[(j, i)];
            }
        }
        acc
    }

    /// Tr(ρ) := ρ(𝕀) = ∫ρ̂ dμ; the regular part never contributes.
    pub fn trace(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(self.diag.iter())
            .map(|(&w, &d)| w * d)
            .sum()
    }

    /// Monte-Carlo probe of ρ(b*b) ≥ 0 over seeded random b ∈ A_vH.
    pub fn positivity_probe(&self, trials: usize, seed: u64, tol: f64) -> PositivityReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.grid.len();
        let mut min_real = f64::INFINITY;
        let mut worst_trial = 0;
        for trial in 0..trials {
            let diag = DVector::from_fn(n, |_, _| random_unit_complex(&mut rng));
            let reg = DMatrix::from_fn(n, n, |_, _| random_unit_complex(&mut rng));
            let b = VanHoveElement::from_parts(Arc::clone(&self.grid), diag, reg);
            let value = self
                .expectation(&b.star().multiply(&b).expect("same grid"))
                .expect("same grid")
                .re;
            if value < min_real {
                min_real = value;
                worst_trial = trial;
            }
        }
        PositivityReport {
            trials,
            min_real,
            worst_trial,
            tol,
            failed: min_real < -tol,
        }
    }

    /// Restriction to the abelian subalgebra: (ρ̂, 0).
    pub fn reduce(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            diag: self.diag.clone(),
            reg: DMatrix::zeros(self.grid.len(), self.grid.len()),
            normalized: self.normalized,
        }
    }

    /// View the state as an algebra element (used for regularity reports).
    pub fn to_element(&self) -> VanHoveElement {
        let diag = DVector::from_iterator(
            self.grid.len(),
            self.diag.iter().map(|&d| Complex64::new(d, 0.0)),
        );
        VanHoveElement::from_parts(Arc::clone(&self.grid), diag, self.reg.clone())
    }

    /// |∫ρ̂ dμ − 1|.
    pub fn normalization_residual(&self) -> f64 {
        (self.trace() - 1.0).abs()
    }

    /// max |ρ_r(Ω,Ω′) − conj(ρ_r(Ω′,Ω))|.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_deviation(&self.reg)
    }

    /// Smallest eigenvalue of the weighted kernel matrix.
    pub fn min_kernel_eigenvalue(&self) -> f64 {
        min_weighted_eigenvalue(&self.grid, &self.reg)
    }
}

/// Outcome of a positivity probe.
#[derive(Debug, Clone, Copy)]
pub struct PositivityReport {
    pub trials: usize,
    /// Smallest observed Re ρ(b*b).
    pub min_real: f64,
    pub worst_trial: usize,
    pub tol: f64,
    pub failed: bool,
}

fn random_unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn hermiticity_deviation(reg: &DMatrix<Complex64>) -> f64 {
    let n = reg.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((reg[(i, j)] - reg[(j, i)].conj()).norm());
        }
    }
    dev
}

fn min_weighted_eigenvalue(grid: &SpectralGrid, reg: &DMatrix<Complex64>) -> f64 {
    let n = grid.len();
    if reg.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return 0.0;
    }
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let mut weighted = DMatrix::from_fn(n, n, |i, j| sqrt_w[i] * reg[(i, j)] * sqrt_w[j]);
    // Symmetrize away the allowed hermiticity tolerance before the
    // eigendecomposition.
    let adj = weighted.adjoint();
    weighted = (weighted + adj).scale(0.5);
    let eig = weighted.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}
