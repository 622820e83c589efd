//! Schwartz-seminorm estimation on sampled symbols.
//!
//! The seminorms p_{n,m}(f) = sup (1+x²)ⁿ|Dᵐf(x)| are estimated on the grid
//! with finite-difference derivatives. Nodes are generally not equally
//! spaced (Gauss panels), so the stencil weights are generated for the
//! actual node positions; a five-point window is centered where possible and
//! shifted one-sided at the boundaries.

use num_complex::Complex64;

use super::GridError;

/// Stencil width used for derivative estimation.
pub const STENCIL: usize = 5;

/// Highest derivative order the stencil supports.
pub const MAX_DERIVATIVE: usize = STENCIL - 1;

/// Finite-difference weights for the m-th derivative at `x0` on arbitrary
/// nodes `xs` (Fornberg's recurrence).
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(m < n, "derivative order {m} needs more than {n} nodes");
    // c[k][j]: weight of node j for the k-th derivative, built incrementally.
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=m.min(i)).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=m.min(i)).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c.pop().unwrap()
}

/// m-th derivative of sampled values at every node, five-point stencils.
pub fn derivative(
    positions: &[f64],
    values: &[Complex64],
    m: usize,
) -> Result<Vec<Complex64>, GridError> {
    let n = positions.len();
    if m > MAX_DERIVATIVE || m >= n {
        return Err(GridError::StencilOrder {
            m,
            max: MAX_DERIVATIVE.min(n.saturating_sub(1)),
        });
    }
    if m == 0 {
        return Ok(values.to_vec());
    }
    let width = STENCIL.min(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(width / 2).min(n - width);
        let xs = &positions[lo..lo + width];
        let w = fd_weights(positions[i], xs, m);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &wk) in w.iter().enumerate() {
            acc += wk * values[lo + k];
        }
        out.push(acc);
    }
    Ok(out)
}

/// sup over the nodes of (1+x²)ⁿ·|Dᵐf(x)|.
pub fn seminorm(
    positions: &[f64],
    values: &[Complex64],
    n: usize,
    m: usize,
) -> Result<f64, GridError> {
    let deriv = derivative(positions, values, m)?;
    let mut sup = 0.0_f64;
    for (x, d) in positions.iter().zip(&deriv) {
        let weight = (1.0 + x * x).powi(n as i32);
        sup = sup.max(weight * d.norm());
    }
    Ok(sup)
}

/// Weighted profile (1+x²)ⁿ·|Dᵐf| per node, for boundary-growth diagnostics.
pub fn weighted_profile(
    positions: &[f64],
    values: &[Complex64],
    n: usize,
    m: usize,
) -> Result<Vec<f64>, GridError> {
    let deriv = derivative(positions, values, m)?;
    Ok(positions
        .iter()
        .zip(&deriv)
        .map(|(x, d)| (1.0 + x * x).powi(n as i32) * d.norm())
        .collect())
}
