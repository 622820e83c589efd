//! Quadrature rules for the continuous spectral axes.
//!
//! Rules are looked up by name through [`QuadratureRegistry`], so a scenario
//! config can select the rule per axis. The default is composite
//! Gauss–Legendre; the trapezoid rule is kept as an independent low-order
//! cross-check.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::GridError;

/// Nodes per Gauss–Legendre panel before the interval is split.
const MAX_PANEL_NODES: usize = 64;

/// A quadrature rule on a finite interval.
///
/// Implementations return `n` strictly increasing nodes inside
/// `[lower, upper]` with strictly positive weights summing to the interval
/// length.
pub trait QuadratureRule: Send + Sync {
    /// Registry key, e.g. `"gauss_legendre"`.
    fn name(&self) -> &'static str;

    /// One-line description for `list`-style output.
    fn describe(&self) -> &'static str;

    /// Nodes and weights for `n` points on `[lower, upper]`.
    fn nodes_weights(
        &self,
        lower: f64,
        upper: f64,
        n: usize,
    ) -> Result<(Vec<f64>, Vec<f64>), GridError>;
}

fn check_interval(lower: f64, upper: f64, n: usize) -> Result<(), GridError> {
    if n < 2 {
        return Err(GridError::NodeCount { n });
    }
    if !(lower.is_finite() && upper.is_finite()) || upper <= lower {
        return Err(GridError::BadInterval { lower, upper });
    }
    Ok(())
}

/// Composite Gauss–Legendre panels.
///
/// For `n ≤ 64` a single panel of degree `n` is used; larger requests are
/// split into `ceil(n/64)` equal-width panels whose node counts differ by at
/// most one and sum to exactly `n`.
pub struct CompositeGaussLegendre;

impl QuadratureRule for CompositeGaussLegendre {
    fn name(&self) -> &'static str {
        "gauss_legendre"
    }

    fn describe(&self) -> &'static str {
        "composite Gauss-Legendre panels (spectral accuracy for smooth integrands)"
    }

    fn nodes_weights(
        &self,
        lower: f64,
        upper: f64,
        n: usize,
    ) -> Result<(Vec<f64>, Vec<f64>), GridError> {
        check_interval(lower, upper, n)?;
        let panels = n.div_ceil(MAX_PANEL_NODES);
        let width = (upper - lower) / panels as f64;
        let base = n / panels;
        let extra = n % panels;

        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for p in 0..panels {
            // First `extra` panels carry one extra node.
            let count = base + usize::from(p < extra);
            let a = lower + p as f64 * width;
            let b = if p + 1 == panels { upper } else { a + width };
            let (x, w) = legendre_reference(count);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for k in 0..count {
                nodes.push(mid + half * x[k]);
                weights.push(half * w[k]);
            }
        }
        Ok((nodes, weights))
    }
}

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for k in 0..m {
        // Chebyshev-like initial guess for the k-th root from the top.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_value_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_value_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        weights[k] = w;
        nodes[n - 1 - k] = x;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        // The middle root of an odd rule is exactly zero.
        let (_, dp) = legendre_value_derivative(n, 0.0);
        nodes[m - 1] = 0.0;
        weights[m - 1] = 2.0 / (dp * dp);
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_value_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Composite trapezoid rule on equally spaced nodes.
pub struct Trapezoid;

impl QuadratureRule for Trapezoid {
    fn name(&self) -> &'static str {
        "trapezoid"
    }

    fn describe(&self) -> &'static str {
        "equally spaced trapezoid rule (order-2 cross-check)"
    }

    fn nodes_weights(
        &self,
        lower: f64,
        upper: f64,
        n: usize,
    ) -> Result<(Vec<f64>, Vec<f64>), GridError> {
        check_interval(lower, upper, n)?;
        let h = (upper - lower) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n)
            .map(|k| {
                if k + 1 == n {
                    upper
                } else {
                    lower + k as f64 * h
                }
            })
            .collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok((nodes, weights))
    }
}

/// Name-keyed registry of quadrature rules.
#[derive(Clone)]
pub struct QuadratureRegistry {
    rules: BTreeMap<&'static str, Arc<dyn QuadratureRule>>,
}

impl QuadratureRegistry {
    /// Registry with the built-in rules (`gauss_legendre`, `trapezoid`).
    pub fn builtin() -> Self {
        let mut reg = Self {
            rules: BTreeMap::new(),
        };
        reg.register(Arc::new(CompositeGaussLegendre));
        reg.register(Arc::new(Trapezoid));
        reg
    }

    /// Add or replace a rule under its own name.
    pub fn register(&mut self, rule: Arc<dyn QuadratureRule>) {
        self.rules.insert(rule.name(), rule);
    }

    /// Look up a rule by name.
    pub fn get(&self, name: &str) -> Result<Arc<dyn QuadratureRule>, GridError> {
        self.rules
            .get(name)
            .cloned()
            .ok_or_else(|| GridError::UnknownRule {
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    /// Registered rule names, sorted.
    pub fn names(&self) -> Vec<&'static str> {
        self.rules.keys().copied().collect()
    }
}

impl Default for QuadratureRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
