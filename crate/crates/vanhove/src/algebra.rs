//! The van Hove algebra A_vH = Â ⊕ V_r over a spectral grid.
//!
//! An element is a pair a = â + a_r: a diagonal symbol â(Ω) standing for the
//! semiregular kernel â(Ω)δ(ω−ω′), plus a regular kernel a_r(Ω,Ω′) stored as
//! a dense matrix over the grid nodes. The δ is never discretized as a grid
//! spike: it contracts analytically in every operation, and the regular
//! part contracts through the quadrature weights, so the discretized product
//! reproduces the generalized-matrix product exactly (up to rounding) and no
//! operation can produce a "δ of δ" term.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::grid::{GridError, SampledFunction, SpectralGrid};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("elements live on different grids")]
    GridMismatch,
    #[error("regular kernel is {rows}x{cols}, the grid needs {expected}x{expected}")]
    KernelShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// An element a = â + a_r of the van Hove algebra.
///
/// The decomposition is unique by construction: the symbol of the δ-part and
/// the regular kernel are stored separately and never mixed.
#[derive(Debug, Clone)]
pub struct VanHoveElement {
    grid: Arc<SpectralGrid>,
    diag: DVector<Complex64>,
    reg: DMatrix<Complex64>,
}

impl VanHoveElement {
    /// Assemble an element from its diagonal symbol and regular kernel.
    ///
    /// Stores the pair as-is; regularity checks are explicit via
    /// [`classify_regularity`](Self::classify_regularity).
    pub fn new(diag: SampledFunction, reg: DMatrix<Complex64>) -> Result<Self, AlgebraError> {
        let grid = Arc::clone(diag.grid());
        let n = grid.len();
        if reg.nrows() != n || reg.ncols() != n {
            return Err(AlgebraError::KernelShape {
                rows: reg.nrows(),
                cols: reg.ncols(),
                expected: n,
            });
        }
        Ok(Self {
            grid,
            diag: diag.values().clone(),
            reg,
        })
    }

    /// The zero element.
    pub fn zero(grid: &Arc<SpectralGrid>) -> Self {
        let n = grid.len();
        Self {
            grid: Arc::clone(grid),
            diag: DVector::zeros(n),
            reg: DMatrix::zeros(n, n),
        }
    }

    /// The identity 𝕀, whose kernel is δ(ω−ω′).
    pub fn identity(grid: &Arc<SpectralGrid>) -> Self {
        let n = grid.len();
        Self {
            grid: Arc::clone(grid),
            diag: DVector::from_element(n, Complex64::new(1.0, 0.0)),
            reg: DMatrix::zeros(n, n),
        }
    }

    /// A member of the abelian subalgebra Â: diag = f, regular part zero.
    pub fn diagonal(f: &SampledFunction) -> Self {
        let grid = Arc::clone(f.grid());
        let n = grid.len();
        Self {
            grid,
            diag: f.values().clone(),
            reg: DMatrix::zeros(n, n),
        }
    }

    /// The Hamiltonian H: the diagonal symbol is the energy coordinate.
    pub fn hamiltonian(grid: &Arc<SpectralGrid>) -> Self {
        let f = SampledFunction::from_real_fn(grid, |x| x[0]);
        Self::diagonal(&f)
    }

    /// Rank-one regular kernel u ⊗ v̄, i.e. reg(Ω,Ω′) = u(Ω)·conj(v(Ω′)).
    pub fn rank_one(u: &SampledFunction, v: &SampledFunction) -> Result<Self, AlgebraError> {
        if u.grid().id() != v.grid().id() {
            return Err(AlgebraError::GridMismatch);
        }
        let grid = Arc::clone(u.grid());
        let n = grid.len();
        let reg = DMatrix::from_fn(n, n, |i, j| u.value(i) * v.value(j).conj());
        Ok(Self {
            grid,
            diag: DVector::zeros(n),
            reg,
        })
    }

    pub(crate) fn from_parts(
        grid: Arc<SpectralGrid>,
        diag: DVector<Complex64>,
        reg: DMatrix<Complex64>,
    ) -> Self {
        debug_assert_eq!(diag.len(), grid.len());
        debug_assert_eq!(reg.nrows(), grid.len());
        debug_assert_eq!(reg.ncols(), grid.len());
        Self { grid, diag, reg }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// The diagonal symbol â(Ω).
    pub fn diag(&self) -> &DVector<Complex64> {
        &self.diag
    }

    /// The regular kernel a_r(Ω,Ω′).
    pub fn reg(&self) -> &DMatrix<Complex64> {
        &self.reg
    }

    /// True when the regular kernel vanishes identically (element of Â).
    pub fn is_diagonal(&self) -> bool {
        self.reg.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    fn check_same_grid(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.grid.id() != other.grid.id() {
            return Err(AlgebraError::GridMismatch);
        }
        Ok(())
    }

    /// Generalized-matrix product on the Â ⊕ V_r decomposition:
    /// the δ-parts contract analytically, reg×reg by quadrature, so
    ///
    /// diag_c = â·b̂,
    /// reg_c(Ω,Ω′) = â(Ω)·b_r(Ω,Ω′) + a_r(Ω,Ω′)·b̂(Ω′) + ∑_k w_k a_r(Ω,Ω_k) b_r(Ω_k,Ω′).
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_grid(other)?;
        let n = self.grid.len();
        let diag = self.diag.component_mul(&other.diag);

        // Weighted contraction reg_a · W · reg_b.
        let mut scaled = self.reg.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= Complex64::new(self.grid.weight(k), 0.0);
        }
        let mut reg = scaled * &other.reg;

        for i in 0..n {
            let ai = self.diag[i];
            for j in 0..n {
                reg[(i, j)] += ai * other.reg[(i, j)] + self.reg[(i, j)] * other.diag[j];
            }
        }
        Ok(Self {
            grid: Arc::clone(&self.grid),
            diag,
            reg,
        })
    }

    /// The * operation: conjugation followed by transposition on the regular
    /// kernel, plain conjugation on the diagonal symbol.
    pub fn star(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            diag: self.diag.map(|z| z.conj()),
            reg: self.reg.adjoint(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            diag: &self.diag + &other.diag,
            reg: &self.reg + &other.reg,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            diag: &self.diag - &other.diag,
            reg: &self.reg - &other.reg,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            diag: self.diag.map(|z| c * z),
            reg: self.reg.map(|z| c * z),
        }
    }

    /// [a, b] = ab − ba.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// Whether a* = a within `tol`: real diagonal symbol and hermitian
    /// regular kernel.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let diag_dev = self
            .diag
            .iter()
            .map(|z| (z - z.conj()).norm())
            .fold(0.0, f64::max);
        if diag_dev > tol {
            return false;
        }
        let n = self.grid.len();
        let mut reg_dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                reg_dev = reg_dev.max((self.reg[(i, j)] - self.reg[(j, i)].conj()).norm());
            }
        }
        reg_dev <= tol
    }

    /// Apply the kernel to a sampled function:
    /// out(Ω) = â(Ω)·f(Ω) + ∑_j w_j a_r(Ω,Ω_j) f(Ω_j).
    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction, AlgebraError> {
        if f.grid().id() != self.grid.id() {
            return Err(AlgebraError::GridMismatch);
        }
        let weighted = DVector::from_iterator(
            self.grid.len(),
            f.values()
                .iter()
                .enumerate()
                .map(|(j, v)| v * self.grid.weight(j)),
        );
        let mut out = &self.reg * weighted;
        out += self.diag.component_mul(f.values());
        Ok(SampledFunction::from_vector(Arc::clone(&self.grid), out))
    }

    /// Tabulate Schwartz seminorms of the symbol and kernel and classify the
    /// element against the thresholds. See [`classify_regularity`].
    pub fn classify_regularity(
        &self,
        thresholds: &RegularityThresholds,
    ) -> Result<RegularityReport, AlgebraError> {
        classify_regularity(self, thresholds)
    }
}

/// Thresholds for the advisory regularity classification.
///
/// `bound` caps every tabulated p_{n,m}; the boundary-growth test flags
/// weighted profiles that are still rising at the truncation edge (a
/// polynomially growing symbol on a truncated grid never exceeds a fixed
/// bound, but its profile keeps climbing toward ω_max).
#[derive(Debug, Clone)]
pub struct RegularityThresholds {
    /// Largest weight exponent n in (1+x²)ⁿ.
    pub max_weight_exponent: usize,
    /// Largest derivative order m.
    pub max_derivative: usize,
    /// Cap on p_{n,m}.
    pub bound: f64,
    /// Number of trailing nodes inspected for boundary growth.
    pub tail_window: usize,
    /// Growth is only flagged when the edge value exceeds this fraction of
    /// the profile maximum (keeps rounding noise from flagging).
    pub tail_floor: f64,
}

impl Default for RegularityThresholds {
    fn default() -> Self {
        Self {
            max_weight_exponent: 2,
            max_derivative: 2,
            bound: 1e6,
            tail_window: 5,
            tail_floor: 1e-3,
        }
    }
}

/// Which part of the element a seminorm entry refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeminormTarget {
    Diagonal,
    KernelRows,
    KernelColumns,
}

#[derive(Debug, Clone)]
pub struct SeminormEntry {
    pub target: SeminormTarget,
    pub weight_exponent: usize,
    pub derivative: usize,
    /// sup over slices and nodes of (1+x²)ⁿ|Dᵐ·|.
    pub value: f64,
    /// Whether the weighted profile is still rising at the truncation edge.
    pub boundary_growth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Suspect,
}

/// Seminorm table with the derived classification flag.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub entries: Vec<SeminormEntry>,
    pub classification: Regularity,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.classification == Regularity::Regular
    }

    /// Largest tabulated seminorm.
    pub fn max_value(&self) -> f64 {
        self.entries.iter().map(|e| e.value).fold(0.0, f64::max)
    }
}

/// Tabulate p_{n,m} for the diagonal symbol and for the rows and columns of
/// the regular kernel, then classify.
///
/// Seminorms are taken along the continuous energy axis; on product grids
/// every energy slice (fixed values of the remaining indices) is scanned and
/// the sup over slices is reported. The element is flagged `Suspect` when a
/// tabulated value exceeds `thresholds.bound` or a weighted profile keeps
/// growing at the truncation boundary, signalling that the Riemann–Lebesgue
/// hypotheses may fail.
pub fn classify_regularity(
    a: &VanHoveElement,
    thresholds: &RegularityThresholds,
) -> Result<RegularityReport, AlgebraError> {
    let grid = a.grid();
    let xs = grid.continuous_energy_positions();
    let slices = grid.energy_slices();
    let n_nodes = grid.len();

    let mut entries = Vec::new();
    for n in 0..=thresholds.max_weight_exponent {
        for m in 0..=thresholds.max_derivative {
            let mut diag_entry = SliceAccumulator::new();
            for slice in &slices {
                let vals: Vec<Complex64> = slice.iter().map(|&i| a.diag()[i]).collect();
                diag_entry.update(grid, &xs, &vals, n, m, thresholds)?;
            }
            entries.push(diag_entry.entry(SeminormTarget::Diagonal, n, m));

            let mut row_entry = SliceAccumulator::new();
            let mut col_entry = SliceAccumulator::new();
            for fixed in 0..n_nodes {
                for slice in &slices {
                    let row: Vec<Complex64> = slice.iter().map(|&j| a.reg()[(fixed, j)]).collect();
                    row_entry.update(grid, &xs, &row, n, m, thresholds)?;
                    let col: Vec<Complex64> = slice.iter().map(|&i| a.reg()[(i, fixed)]).collect();
                    col_entry.update(grid, &xs, &col, n, m, thresholds)?;
                }
            }
            entries.push(row_entry.entry(SeminormTarget::KernelRows, n, m));
            entries.push(col_entry.entry(SeminormTarget::KernelColumns, n, m));
        }
    }

    let suspect = entries
        .iter()
        .any(|e| e.value > thresholds.bound || e.boundary_growth);
    Ok(RegularityReport {
        entries,
        classification: if suspect {
            Regularity::Suspect
        } else {
            Regularity::Regular
        },
    })
}

struct SliceAccumulator {
    sup: f64,
    growth: bool,
}

impl SliceAccumulator {
    fn new() -> Self {
        Self {
            sup: 0.0,
            growth: false,
        }
    }

    fn update(
        &mut self,
        grid: &SpectralGrid,
        xs: &[f64],
        values: &[Complex64],
        n: usize,
        m: usize,
        thresholds: &RegularityThresholds,
    ) -> Result<(), AlgebraError> {
        let profile = grid.seminorm_profile(xs, values, n, m)?;
        let max = profile.iter().cloned().fold(0.0, f64::max);
        self.sup = self.sup.max(max);
        let window = thresholds.tail_window.min(profile.len());
        if window >= 2 && max > 0.0 {
            let tail = &profile[profile.len() - window..];
            let rising = tail.windows(2).all(|p| p[1] > p[0]);
            if rising && tail[window - 1] > thresholds.tail_floor * max {
                self.growth = true;
            }
        }
        Ok(())
    }

    fn entry(self, target: SeminormTarget, n: usize, m: usize) -> SeminormEntry {
        SeminormEntry {
            target,
            weight_exponent: n,
            derivative: m,
            value: self.sup,
            boundary_growth: self.growth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AxisSpec, QuadratureRegistry};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn test_grid(n: usize) -> Arc<SpectralGrid> {
        SpectralGrid::single_axis(
            AxisSpec::continuous(0.0, 10.0, n),
            &QuadratureRegistry::builtin(),
        )
        .unwrap()
    }

    fn random_element(grid: &Arc<SpectralGrid>, rng: &mut ChaCha8Rng) -> VanHoveElement {
        let n = grid.len();
        let diag = DVector::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let reg = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        VanHoveElement::from_parts(Arc::clone(grid), diag, reg)
    }

    fn max_dev(a: &VanHoveElement, b: &VanHoveElement) -> f64 {
        let diag = (&a.diag - &b.diag)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let reg = (&a.reg - &b.reg)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        diag.max(reg)
    }

    fn scale_of(a: &VanHoveElement) -> f64 {
        let diag = a.diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let reg = a.reg.iter().map(|z| z.norm()).fold(0.0, f64::max);
        diag.max(reg).max(1.0)
    }

    fn gaussian_fn(center: f64, width: f64) -> impl Fn(&[f64]) -> f64 {
        move |x: &[f64]| (-((x[0] - center) * (x[0] - center)) / (2.0 * width * width)).exp()
    }

    #[test]
    fn zero_identity_hamiltonian_construct() {
        let grid = test_grid(16);
        let zero = VanHoveElement::zero(&grid);
        assert!(zero.is_diagonal());
        assert!(zero.diag.iter().all(|z| z.norm() == 0.0));

        let id = VanHoveElement::identity(&grid);
        assert!(id.diag.iter().all(|&z| z == Complex64::new(1.0, 0.0)));
        assert!(id.is_diagonal());

        let h = VanHoveElement::hamiltonian(&grid);
        for i in 0..grid.len() {
            assert_eq!(h.diag[i], Complex64::new(grid.energy(i), 0.0));
        }
    }

    #[test]
    fn kernel_shape_mismatch_rejected() {
        let grid = test_grid(8);
        let diag = SampledFunction::zeros(&grid);
        let reg = DMatrix::zeros(4, 4);
        assert!(matches!(
            VanHoveElement::new(diag, reg),
            Err(AlgebraError::KernelShape { .. })
        ));
    }

    #[test]
    fn identity_is_the_unit() {
        let grid = test_grid(24);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let id = VanHoveElement::identity(&grid);
        for _ in 0..5 {
            let a = random_element(&grid, &mut rng);
            let left = id.multiply(&a).unwrap();
            let right = a.multiply(&id).unwrap();
            assert!(max_dev(&left, &a) <= 1e-12 * scale_of(&a));
            assert!(max_dev(&right, &a) <= 1e-12 * scale_of(&a));
        }
        let star = id.star();
        assert_eq!(max_dev(&star, &id), 0.0);
    }

    #[test]
    fn diagonal_subalgebra_is_closed_and_abelian() {
        let grid = test_grid(32);
        let f = SampledFunction::from_real_fn(&grid, gaussian_fn(3.0, 1.0));
        let g = SampledFunction::from_real_fn(&grid, gaussian_fn(6.0, 2.0));
        let df = VanHoveElement::diagonal(&f);
        let dg = VanHoveElement::diagonal(&g);

        let prod = df.multiply(&dg).unwrap();
        assert!(
            prod.is_diagonal(),
            "diag×diag must stay in the abelian subalgebra exactly"
        );
        for i in 0..grid.len() {
            assert!((prod.diag[i] - f.value(i) * g.value(i)).norm() == 0.0);
        }
        assert!(prod.star().is_diagonal());

        let comm = df.commutator(&dg).unwrap();
        assert_eq!(max_dev(&comm, &VanHoveElement::zero(&grid)), 0.0);
    }

    #[test]
    fn rank_one_square_matches_contraction_oracle() {
        let grid = test_grid(48);
        let g = SampledFunction::from_real_fn(&grid, gaussian_fn(5.0, 1.0));
        let a = VanHoveElement::rank_one(&g, &g).unwrap();
        let sq = a.multiply(&a).unwrap();

        // (g⊗ḡ · g⊗ḡ)(i,j) = (∑_k w_k |g_k|²) g_i ḡ_j.
        let norm: Complex64 = (0..grid.len())
            .map(|k| Complex64::new(grid.weight(k), 0.0) * g.value(k) * g.value(k).conj())
            .sum();
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                let expect = norm * g.value(i) * g.value(j).conj();
                assert!((sq.reg[(i, j)] - expect).norm() <= 1e-13 * norm.norm());
            }
        }
        assert!(sq.diag.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn star_is_involutive_and_antimultiplicative() {
        let grid = test_grid(24);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = random_element(&grid, &mut rng);
            let b = random_element(&grid, &mut rng);
            // a** = a exactly.
            assert_eq!(max_dev(&a.star().star(), &a), 0.0);
            // (ab)* = b*a*.
            let lhs = a.multiply(&b).unwrap().star();
            let rhs = b.star().multiply(&a.star()).unwrap();
            let scale = scale_of(&lhs);
            assert!(max_dev(&lhs, &rhs) <= 1e-12 * scale);
            // (a+b)* = a*+b* and (c·a)* = conj(c)·a*.
            let sum_star = a.add(&b).unwrap().star();
            let star_sum = a.star().add(&b.star()).unwrap();
            assert_eq!(max_dev(&sum_star, &star_sum), 0.0);
            let c = Complex64::new(0.3, -0.8);
            let lhs = a.scale(c).star();
            let rhs = a.star().scale(c.conj());
            assert!(max_dev(&lhs, &rhs) <= 1e-15 * scale_of(&lhs));
        }
    }

    #[test]
    fn hermitian_element_is_fixed_by_star() {
        let grid = test_grid(20);
        let g = SampledFunction::from_real_fn(&grid, gaussian_fn(4.0, 1.5));
        let herm = VanHoveElement::rank_one(&g, &g).unwrap();
        let with_diag = herm.add(&VanHoveElement::hamiltonian(&grid)).unwrap();
        assert_eq!(max_dev(&with_diag.star(), &with_diag), 0.0);
        assert!(with_diag.is_symmetric(0.0));
    }

    #[test]
    fn multiply_is_associative_distributive() {
        let grid = test_grid(24);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..4 {
            let a = random_element(&grid, &mut rng);
            let b = random_element(&grid, &mut rng);
            let c = random_element(&grid, &mut rng);
            let lhs = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let rhs = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert!(max_dev(&lhs, &rhs) <= 1e-12 * scale_of(&lhs));

            let dist_l = a.multiply(&b.add(&c).unwrap()).unwrap();
            let dist_r = a
                .multiply(&b)
                .unwrap()
                .add(&a.multiply(&c).unwrap())
                .unwrap();
            assert!(max_dev(&dist_l, &dist_r) <= 1e-12 * scale_of(&dist_l));
        }
    }

    #[test]
    fn vector_space_laws() {
        let grid = test_grid(16);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_element(&grid, &mut rng);
        let b = random_element(&grid, &mut rng);
        let zero = VanHoveElement::zero(&grid);

        assert_eq!(max_dev(&a.add(&zero).unwrap(), &a), 0.0);
        assert_eq!(max_dev(&a.scale(Complex64::new(0.0, 0.0)), &zero), 0.0);
        let c = Complex64::new(-1.25, 0.5);
        let lhs = a.add(&b).unwrap().scale(c);
        let rhs = a.scale(c).add(&b.scale(c)).unwrap();
        assert!(max_dev(&lhs, &rhs) <= 1e-14 * scale_of(&lhs));
    }

    #[test]
    fn commutator_with_hamiltonian_matches_frequency_oracle() {
        let grid = test_grid(32);
        let h = VanHoveElement::hamiltonian(&grid);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = {
            let mut e = random_element(&grid, &mut rng);
            e.diag = DVector::zeros(grid.len());
            e
        };
        assert!(max_dev(&a.commutator(&a).unwrap(), &VanHoveElement::zero(&grid)) == 0.0);

        // [H, a]_r(Ω,Ω′) = (ω − ω′)·a_r(Ω,Ω′), elementwise.
        let comm = h.commutator(&a).unwrap();
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                let expect = Complex64::new(grid.energy(i) - grid.energy(j), 0.0) * a.reg[(i, j)];
                assert!((comm.reg[(i, j)] - expect).norm() <= 1e-12 * 10.0);
            }
        }
        assert!(comm.diag.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn symmetry_checks() {
        let grid = test_grid(20);
        let h = VanHoveElement::hamiltonian(&grid);
        assert!(h.is_symmetric(0.0));

        let g = SampledFunction::from_real_fn(&grid, gaussian_fn(5.0, 1.0));
        let anti = VanHoveElement::rank_one(&g, &g)
            .unwrap()
            .scale(Complex64::new(0.0, 1.0));
        assert!(!anti.is_symmetric(1e-10));

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_element(&grid, &mut rng);
        let sym = a.star().add(&a).unwrap();
        assert!(sym.is_symmetric(1e-13));
    }

    #[test]
    fn symmetric_elements_do_not_close_under_product() {
        let grid = test_grid(24);
        let h = VanHoveElement::hamiltonian(&grid);
        let g = SampledFunction::from_real_fn(&grid, gaussian_fn(5.0, 1.0));
        let b = VanHoveElement::rank_one(&g, &g).unwrap();
        assert!(h.is_symmetric(0.0) && b.is_symmetric(0.0));
        // (Hb)_r(ω,ω′) = ω·g(ω)g(ω′) is not hermitian.
        assert!(!h.multiply(&b).unwrap().is_symmetric(1e-6));
    }

    #[test]
    fn apply_matches_direct_sums() {
        let grid = test_grid(32);
        let f = SampledFunction::from_real_fn(&grid, gaussian_fn(2.0, 1.0));

        let id = VanHoveElement::identity(&grid);
        let out = id.apply(&f).unwrap();
        for i in 0..grid.len() {
            assert_eq!(out.value(i), f.value(i));
        }

        let h = VanHoveElement::hamiltonian(&grid);
        let out = h.apply(&f).unwrap();
        for i in 0..grid.len() {
            assert_eq!(
                out.value(i),
                Complex64::new(grid.energy(i), 0.0) * f.value(i)
            );
        }

        // Rank-one g⊗h̄ maps f to g·(∑ w h̄ f).
        let g = SampledFunction::from_real_fn(&grid, gaussian_fn(5.0, 1.0));
        let hbar = SampledFunction::from_real_fn(&grid, gaussian_fn(7.0, 2.0));
        let k = VanHoveElement::rank_one(&g, &hbar).unwrap();
        let out = k.apply(&f).unwrap();
        let inner: Complex64 = (0..grid.len())
            .map(|j| Complex64::new(grid.weight(j), 0.0) * hbar.value(j).conj() * f.value(j))
            .sum();
        for i in 0..grid.len() {
            let expect = g.value(i) * inner;
            assert!((out.value(i) - expect).norm() <= 1e-14);
        }
    }

    #[test]
    fn gaussian_element_classifies_regular() {
        let grid = test_grid(96);
        let f = SampledFunction::from_real_fn(&grid, gaussian_fn(5.0, 1.0));
        let a = VanHoveElement::rank_one(&f, &f)
            .unwrap()
            .add(&VanHoveElement::diagonal(&f))
            .unwrap();
        let report = a
            .classify_regularity(&RegularityThresholds::default())
            .unwrap();
        assert!(report.is_regular(), "entries: {:?}", report.entries);
        assert!(report.max_value().is_finite());
    }

    #[test]
    fn identity_classifies_suspect_for_growing_weight() {
        let grid = test_grid(96);
        let id = VanHoveElement::identity(&grid);
        let report = id
            .classify_regularity(&RegularityThresholds::default())
            .unwrap();
        assert_eq!(report.classification, Regularity::Suspect);
        // The n ≥ 1 diagonal rows drive the flag: (1+x²)·1 keeps growing.
        assert!(report
            .entries
            .iter()
            .any(|e| e.target == SeminormTarget::Diagonal
                && e.weight_exponent >= 1
                && e.boundary_growth));
    }

    #[test]
    fn zero_element_classifies_regular_with_null_table() {
        let grid = test_grid(48);
        let zero = VanHoveElement::zero(&grid);
        let report = zero
            .classify_regularity(&RegularityThresholds::default())
            .unwrap();
        assert!(report.is_regular());
        assert_eq!(report.max_value(), 0.0);
    }

    #[test]
    fn cross_grid_operations_rejected() {
        let g1 = test_grid(8);
        let g2 = test_grid(8);
        let a = VanHoveElement::identity(&g1);
        let b = VanHoveElement::identity(&g2);
        assert!(matches!(a.multiply(&b), Err(AlgebraError::GridMismatch)));
        assert!(matches!(a.add(&b), Err(AlgebraError::GridMismatch)));
        let f = SampledFunction::zeros(&g2);
        assert!(matches!(a.apply(&f), Err(AlgebraError::GridMismatch)));
    }
}
