//! GNS pointer construction over the abelian subalgebra.
//!
//! From the diagonal part ρ̂ of a state, the pre-hilbertian product
//! (â, b̂) := ρ̂(â*b̂) turns Â into a weighted sequence space over the grid:
//! the weight measure is σᵢ = ρ̂(Ωᵢ)·wᵢ, the null set (σ below a relative
//! floor) is quotiented out by projection onto the support, and the algebra
//! acts by left multiplication — diagonal operators in the support-indicator
//! basis. That basis is the final pointer basis: every pointer-CSCO operator
//! is exactly diagonal on it and the decohered state is the diagonal measure
//! σ against ρ̂.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::VanHoveElement;
use crate::evolution::{asymptotic_expectation, EvolutionError};
use crate::grid::SpectralGrid;
use crate::state::VanHoveState;

/// Default relative floor under which a node joins the GNS null space.
pub const DEFAULT_NULL_TOL: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum PointerError {
    #[error("pointer construction is defined on the diagonal subalgebra only (regular kernel must vanish)")]
    NonDiagonal,
    #[error("the GNS space is trivial: the diagonal part vanishes everywhere")]
    TrivialSpace,
    #[error("operands live on different grids")]
    GridMismatch,
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

/// (â, b̂) = ρ̂(â*b̂) = ∑ᵢ wᵢ ρ̂(Ωᵢ) conj(â(Ωᵢ)) b̂(Ωᵢ).
pub fn gns_inner_product(
    a: &VanHoveElement,
    b: &VanHoveElement,
    rho: &VanHoveState,
) -> Result<Complex64, PointerError> {
    if a.grid().id() != rho.grid().id() || b.grid().id() != rho.grid().id() {
        return Err(PointerError::GridMismatch);
    }
    if !a.is_diagonal() || !b.is_diagonal() {
        return Err(PointerError::NonDiagonal);
    }
    let grid = rho.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..grid.len() {
        acc += grid.weight(i) * rho.diag()[i] * a.diag()[i].conj() * b.diag()[i];
    }
    Ok(acc)
}

/// The discretized GNS space H_ρ̂: weight measure σ with its support/null
/// partition of the grid nodes.
#[derive(Debug, Clone)]
pub struct PointerSpace {
    grid: Arc<SpectralGrid>,
    /// σᵢ = ρ̂(Ωᵢ)·wᵢ for every grid node.
    sigma: Vec<f64>,
    /// ρ̂ samples (needed for the basis read-out).
    rho_hat: Vec<f64>,
    support: Vec<usize>,
    null: Vec<usize>,
    null_tol: f64,
}

impl PointerSpace {
    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// σ over all grid nodes.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Node indices carrying the representation.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Quotiented-out node indices.
    pub fn null(&self) -> &[usize] {
        &self.null
    }

    pub fn null_tol(&self) -> f64 {
        self.null_tol
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    /// σ-weighted inner product of support vectors.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.support
            .iter()
            .zip(u.iter().zip(v))
            .map(|(&i, (a, b))| self.sigma[i] * a.conj() * b)
            .sum()
    }

    /// Project the diagonal symbol of an element onto the support (the class
    /// [â] of the quotient).
    pub fn project(&self, a: &VanHoveElement) -> Result<Vec<Complex64>, PointerError> {
        if a.grid().id() != self.grid.id() {
            return Err(PointerError::GridMismatch);
        }
        if !a.is_diagonal() {
            return Err(PointerError::NonDiagonal);
        }
        Ok(self.support.iter().map(|&i| a.diag()[i]).collect())
    }

    /// The normal state vector |R̂): the class of the identity.
    pub fn cyclic_vector(&self) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); self.support.len()]
    }
}

/// Build the GNS space from a state's diagonal part.
///
/// `null_tol` is relative: nodes with ρ̂ below `null_tol · max(ρ̂)` join the
/// null space. Errors when ρ̂ vanishes everywhere.
pub fn build_pointer_space(
    rho: &VanHoveState,
    null_tol: f64,
) -> Result<PointerSpace, PointerError> {
    let grid = Arc::clone(rho.grid());
    let max = rho.diag().iter().cloned().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return Err(PointerError::TrivialSpace);
    }
    let floor = null_tol * max;
    let mut sigma = Vec::with_capacity(grid.len());
    let mut support = Vec::new();
    let mut null = Vec::new();
    for i in 0..grid.len() {
        let rho_i = rho.diag()[i];
        sigma.push(rho_i * grid.weight(i));
        if rho_i > floor {
            support.push(i);
        } else {
            null.push(i);
        }
    }
    if support.is_empty() {
        return Err(PointerError::TrivialSpace);
    }
    Ok(PointerSpace {
        grid,
        sigma,
        rho_hat: rho.diag().iter().cloned().collect(),
        support,
        null,
        null_tol,
    })
}

/// π(â): left multiplication on the support — a diagonal operator.
#[derive(Debug, Clone)]
pub struct PointerOperator {
    grid_id: u64,
    /// Diagonal entries â(Θ) over the support, in support order.
    diag: Vec<Complex64>,
}

impl PointerOperator {
    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    /// Apply to a support vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.diag.iter().zip(v).map(|(d, x)| d * x).collect()
    }

    /// Compose two pointer operators (pointwise product of diagonals).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            grid_id: self.grid_id,
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Adjoint with respect to the σ-weighted inner product: the weights are
    /// real and diagonal, so the adjoint is entrywise conjugation.
    pub fn adjoint(&self) -> Self {
        Self {
            grid_id: self.grid_id,
            diag: self.diag.iter().map(|d| d.conj()).collect(),
        }
    }

    /// Materialize as a dense matrix on the support (for diagonality checks).
    pub fn to_matrix(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.diag.len();
        nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// Represent a diagonal element as the left-multiplication operator on the
/// pointer space.
pub fn pointer_representation(
    a: &VanHoveElement,
    space: &PointerSpace,
) -> Result<PointerOperator, PointerError> {
    let diag = space.project(a)?;
    Ok(PointerOperator {
        grid_id: space.grid.id(),
        diag,
    })
}

/// Residual of the cyclic-vector identity (R̂|π(â)|R̂) = ρ̂(â), relative to
/// the right-hand side.
pub fn verify_gns_identity(
    a: &VanHoveElement,
    rho: &VanHoveState,
    space: &PointerSpace,
) -> Result<f64, PointerError> {
    if rho.grid().id() != space.grid.id() {
        return Err(PointerError::GridMismatch);
    }
    let op = pointer_representation(a, space)?;
    let r = space.cyclic_vector();
    let lhs = space.inner(&r, &op.apply(&r));
    let rhs = rho.diag_pairing(a);
    let residual = (lhs - rhs).norm();
    Ok(residual / rhs.norm().max(f64::MIN_POSITIVE))
}

/// The final pointer basis: one generalized eigenvector per support node Θ,
/// read out with its weight σ(Θ) and diagonal value ρ̂(Θ).
#[derive(Debug, Clone)]
pub struct PointerBasis {
    grid: Arc<SpectralGrid>,
    /// Support node indices, lexicographic in (ω, o₁, …, o_N).
    indices: Vec<usize>,
    sigma: Vec<f64>,
    rho_hat: Vec<f64>,
}

impl PointerBasis {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// Grid-node index of basis entry `k`.
    pub fn node_index(&self, k: usize) -> usize {
        self.indices[k]
    }

    /// Multi-index coordinates of basis entry `k`.
    pub fn coordinates(&self, k: usize) -> &[f64] {
        self.grid.node(self.indices[k])
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn rho_hat(&self) -> &[f64] {
        &self.rho_hat
    }
}

/// Extract the pointer basis of a space.
///
/// Support indices inherit the grid's lexicographic node order, so the
/// read-out is deterministic.
pub fn pointer_basis(space: &PointerSpace) -> Result<PointerBasis, PointerError> {
    if space.support.is_empty() {
        return Err(PointerError::TrivialSpace);
    }
    Ok(PointerBasis {
        grid: Arc::clone(&space.grid),
        indices: space.support.clone(),
        sigma: space.support.iter().map(|&i| space.sigma[i]).collect(),
        rho_hat: space.support.iter().map(|&i| space.rho_hat[i]).collect(),
    })
}

/// Residual between the asymptotic expectation ρ̂(â) and the pointer-basis
/// diagonal sum ∑_Θ σ(Θ)·â(Θ), relative to the asymptotic value. A regular
/// part on `a` contributes to neither side.
pub fn full_diagonal_check(
    rho: &VanHoveState,
    a: &VanHoveElement,
    space: &PointerSpace,
) -> Result<f64, PointerError> {
    if rho.grid().id() != space.grid.id() {
        return Err(PointerError::GridMismatch);
    }
    let limit = asymptotic_expectation(rho, a)?;
    let diagonal_sum: f64 = space
        .support
        .iter()
        .map(|&i| space.sigma[i] * a.diag()[i].re)
        .sum();
    Ok((limit - diagonal_sum).abs() / limit.abs().max(f64::MIN_POSITIVE))
}
