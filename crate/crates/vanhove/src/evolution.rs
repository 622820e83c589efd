//! Time evolution and Riemann–Lebesgue decay.
//!
//! The evolution automorphism leaves the diagonal symbol invariant and
//! phases the regular kernel: U_t(a)_r(Ω,Ω′) = e^{i(ω−ω′)t}·a_r(Ω,Ω′).
//! Pairing an evolved observable against a state produces the oscillatory
//! double sum
//!
//!   ρ_r(U_t(a_r)) = ∑ᵢⱼ wᵢwⱼ e^{i(ωⱼ−ωᵢ)t} ρ_r(Ωᵢ,Ωⱼ) a_r(Ωⱼ,Ωᵢ)
//!
//! whose decay in t is the decoherence mechanism. The direct sum is valid
//! while the phase varies slowly across a grid cell; [`BandPolicy`] guards
//! that resolvable band. An accelerated path groups the sum by the phase
//! frequency ν = ω′−ω into an anti-diagonal correlation C(ν) and serves as
//! an independent numerical cross-check.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::VanHoveElement;
use crate::grid::SpectralGrid;
use crate::state::VanHoveState;

/// Default safety constant of the resolvable band t ≤ c/Δω.
pub const DEFAULT_BAND_CONSTANT: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("a decay curve needs at least one sample time")]
    EmptyTimes,
    #[error("sample times must start at t = 0, got {t0}")]
    FirstTimeNotZero { t0: f64 },
    #[error("sample times must be strictly increasing")]
    TimesNotIncreasing,
    #[error(
        "t_max {t_max} exceeds the resolvable band {band:.6} (largest energy cell would alias); \
         refine the grid or override the band"
    )]
    BandExceeded { t_max: f64, band: f64 },
    #[error("threshold must lie in (0, 1), got {threshold}")]
    BadThreshold { threshold: f64 },
    #[error("decay reference is zero: the regular parts vanish at t = 0")]
    DegenerateReference,
    #[error("asymptotic expectation needs a symmetric observable")]
    NotSymmetric,
    #[error("unknown decay model `{name}` (known models: {known})")]
    UnknownModel { name: String, known: String },
}

/// Heisenberg picture: diag unchanged, reg phased with e^{i(ω−ω′)t}.
pub fn evolve_observable(a: &VanHoveElement, t: f64) -> VanHoveElement {
    let grid = a.grid();
    let n = grid.len();
    let reg = DMatrix::from_fn(n, n, |i, j| {
        Complex64::from_polar(1.0, (grid.energy(i) - grid.energy(j)) * t) * a.reg()[(i, j)]
    });
    VanHoveElement::from_parts(Arc::clone(grid), a.diag().clone(), reg)
}

/// Schrödinger picture, dual to [`evolve_observable`]: ρ̂ unchanged, reg
/// phased with the conjugate factor so ρ_t(a) = ρ(U_t(a)) for every a.
pub fn evolve_state(rho: &VanHoveState, t: f64) -> VanHoveState {
    let grid = rho.grid();
    let n = grid.len();
    let reg = DMatrix::from_fn(n, n, |i, j| {
        Complex64::from_polar(1.0, (grid.energy(j) - grid.energy(i)) * t) * rho.reg()[(i, j)]
    });
    let mut out = rho.clone();
    out.set_reg(reg);
    out
}

/// The discretized oscillatory double integral ρ_r(U_t(a_r)).
pub fn offdiagonal_expectation(
    rho: &VanHoveState,
    a: &VanHoveElement,
    t: f64,
) -> Result<Complex64, EvolutionError> {
    if rho.grid().id() != a.grid().id() {
        return Err(EvolutionError::GridMismatch);
    }
    let grid = rho.grid();
    let w = grid.weights();
    let energies = grid.energies();
    let n = grid.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let wi = w[i];
        let ei = energies[i];
        for (j, (&wj, &ej)) in w.iter().zip(energies).enumerate() {
            let phase = Complex64::from_polar(1.0, (ej - ei) * t);
            acc += wi * wj * phase * rho.reg()[(i, j)] * a.reg()[(j, i)];
        }
    }
    Ok(acc)
}

/// Anti-diagonal correlation C(ν) = ∑_{ωⱼ−ωᵢ=ν} wᵢwⱼ ρ_r(Ωᵢ,Ωⱼ) a_r(Ωⱼ,Ωᵢ),
/// reducing the double sum to a one-dimensional transform
/// value(t) = ∑_ν C(ν) e^{iνt}.
///
/// Terms are grouped by bit-identical ν, so the reduction is a pure
/// reassociation of the direct sum and serves as an independent evaluation
/// path for cross-checks.
pub struct AntidiagonalCorrelation {
    frequencies: Vec<f64>,
    amplitudes: Vec<Complex64>,
}

impl AntidiagonalCorrelation {
    pub fn new(rho: &VanHoveState, a: &VanHoveElement) -> Result<Self, EvolutionError> {
        if rho.grid().id() != a.grid().id() {
            return Err(EvolutionError::GridMismatch);
        }
        let grid = rho.grid();
        let w = grid.weights();
        let energies = grid.energies();
        let n = grid.len();
        let mut buckets: HashMap<u64, Complex64> = HashMap::new();
        for i in 0..n {
            let wi = w[i];
            let ei = energies[i];
            for (j, (&wj, &ej)) in w.iter().zip(energies).enumerate() {
                let term = wi * wj * rho.reg()[(i, j)] * a.reg()[(j, i)];
                if term.re == 0.0 && term.im == 0.0 {
                    continue;
                }
                let nu = ej - ei;
                *buckets
                    .entry(nu.to_bits())
                    .or_insert(Complex64::new(0.0, 0.0)) += term;
            }
        }
        let mut pairs: Vec<(f64, Complex64)> = buckets
            .into_iter()
            .map(|(bits, c)| (f64::from_bits(bits), c))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            frequencies: pairs.iter().map(|p| p.0).collect(),
            amplitudes: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Number of distinct frequencies ν.
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// ∑_ν C(ν)·e^{iνt}.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.frequencies
            .iter()
            .zip(&self.amplitudes)
            .map(|(&nu, &c)| Complex64::from_polar(1.0, nu * t) * c)
            .sum()
    }
}

/// Accelerated evaluation of [`offdiagonal_expectation`] through the
/// anti-diagonal correlation.
pub fn antidiagonal_expectation(
    rho: &VanHoveState,
    a: &VanHoveElement,
    t: f64,
) -> Result<Complex64, EvolutionError> {
    Ok(AntidiagonalCorrelation::new(rho, a)?.evaluate(t))
}

/// Largest alias-free sample time for oscillatory sums on this grid.
///
/// The phase e^{iνt} must vary slowly across a grid cell; with Δω the
/// largest continuous energy spacing the band is t ≤ c/Δω.
pub fn resolvable_band(grid: &SpectralGrid, constant: f64) -> f64 {
    let spacing = grid.max_continuous_energy_spacing();
    if spacing == 0.0 {
        f64::INFINITY
    } else {
        constant / spacing
    }
}

/// Band guard for decay-curve sampling.
#[derive(Debug, Clone, Copy)]
pub struct BandPolicy {
    /// Largest trusted sample time.
    pub limit: f64,
    /// Permit sampling beyond the limit (the caller takes responsibility,
    /// e.g. after a refinement check).
    pub allow_beyond: bool,
}

impl BandPolicy {
    pub fn for_grid(grid: &SpectralGrid, constant: f64) -> Self {
        Self {
            limit: resolvable_band(grid, constant),
            allow_beyond: false,
        }
    }

    pub fn overridden(mut self) -> Self {
        self.allow_beyond = true;
        self
    }
}

/// Sampled |ρ_r(U_t(a_r))| against t.
#[derive(Debug, Clone)]
pub struct DecayCurve {
    times: Vec<f64>,
    values: Vec<Complex64>,
    magnitudes: Vec<f64>,
    /// |value| at t = 0 (the static pairing of the regular parts).
    reference: f64,
    /// Truncation-error estimate inherited from the scenario.
    tail_bound: f64,
}

impl DecayCurve {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn reference(&self) -> f64 {
        self.reference
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// |value| at the final sampled time over the reference; 0 when the
    /// curve is degenerate.
    pub fn final_ratio(&self) -> f64 {
        if self.reference == 0.0 {
            0.0
        } else {
            self.magnitudes[self.magnitudes.len() - 1] / self.reference
        }
    }
}

/// Sample the off-diagonal expectation at the given times (t₀ = 0 required).
pub fn decay_curve(
    rho: &VanHoveState,
    a: &VanHoveElement,
    times: &[f64],
    band: &BandPolicy,
    tail_bound: f64,
) -> Result<DecayCurve, EvolutionError> {
    if times.is_empty() {
        return Err(EvolutionError::EmptyTimes);
    }
    if times[0] != 0.0 {
        return Err(EvolutionError::FirstTimeNotZero { t0: times[0] });
    }
    if times.windows(2).any(|p| p[1] <= p[0]) {
        return Err(EvolutionError::TimesNotIncreasing);
    }
    let t_max = times[times.len() - 1];
    if !band.allow_beyond && t_max > band.limit {
        return Err(EvolutionError::BandExceeded {
            t_max,
            band: band.limit,
        });
    }
    let mut values = Vec::with_capacity(times.len());
    let mut magnitudes = Vec::with_capacity(times.len());
    for &t in times {
        let v = offdiagonal_expectation(rho, a, t)?;
        values.push(v);
        magnitudes.push(v.norm());
    }
    let reference = magnitudes[0];
    Ok(DecayCurve {
        times: times.to_vec(),
        values,
        magnitudes,
        reference,
        tail_bound,
    })
}

/// ρ̂(â): the time-independent component that survives the t → ∞ limit when
/// the regular parts satisfy the Riemann–Lebesgue hypotheses.
pub fn asymptotic_expectation(
    rho: &VanHoveState,
    a: &VanHoveElement,
) -> Result<f64, EvolutionError> {
    if rho.grid().id() != a.grid().id() {
        return Err(EvolutionError::GridMismatch);
    }
    if !a.is_symmetric(1e-10) {
        return Err(EvolutionError::NotSymmetric);
    }
    Ok(rho.diag_pairing(a).re)
}

/// One decay-law candidate for the descriptive fit of log|value|.
pub trait DecayModel: Send + Sync {
    /// Registry key, e.g. `"gaussian"`.
    fn name(&self) -> &'static str;

    /// Regressor x(t) in the linear model log|v| = log A − rate·x(t).
    fn regressor(&self, t: f64) -> f64;
}

/// log|v| = log A − α t².
pub struct GaussianDecay;

impl DecayModel for GaussianDecay {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn regressor(&self, t: f64) -> f64 {
        t * t
    }
}

/// log|v| = log A − β t.
pub struct ExponentialDecay;

impl DecayModel for ExponentialDecay {
    fn name(&self) -> &'static str {
        "exponential"
    }

    fn regressor(&self, t: f64) -> f64 {
        t
    }
}

/// Name-keyed registry of decay models.
#[derive(Clone)]
pub struct DecayModelRegistry {
    models: BTreeMap<&'static str, Arc<dyn DecayModel>>,
}

impl DecayModelRegistry {
    pub fn builtin() -> Self {
        let mut reg = Self {
            models: BTreeMap::new(),
        };
        reg.register(Arc::new(GaussianDecay));
        reg.register(Arc::new(ExponentialDecay));
        reg
    }

    pub fn register(&mut self, model: Arc<dyn DecayModel>) {
        self.models.insert(model.name(), model);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn DecayModel>, EvolutionError> {
        self.models
            .get(name)
            .cloned()
            .ok_or_else(|| EvolutionError::UnknownModel {
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.models.keys().copied().collect()
    }
}

impl Default for DecayModelRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Least-squares fit of one decay model to log|value|.
#[derive(Debug, Clone)]
pub struct ModelFit {
    pub model: String,
    /// Fitted amplitude A.
    pub amplitude: f64,
    /// Fitted decay rate (α for gaussian, β for exponential).
    pub rate: f64,
    /// Mean squared residual of log|value|.
    pub mean_squared_residual: f64,
}

/// Threshold crossing and descriptive decay fit for a curve.
#[derive(Debug, Clone)]
pub struct DecoherenceEstimate {
    pub threshold: f64,
    /// First sampled t with |value(t)| ≤ threshold·reference; `None` means
    /// the crossing was not reached within the sampled window.
    pub crossing: Option<f64>,
    /// Best fit among the requested models, when enough points lie above the
    /// fit floor.
    pub fit: Option<ModelFit>,
}

/// Locate the threshold crossing and fit the candidate decay models.
///
/// Samples below `fit_floor`·reference are excluded from the fit (they sit
/// on the quadrature noise floor); the model with the smaller mean squared
/// residual is reported.
pub fn estimate_decoherence_time(
    curve: &DecayCurve,
    threshold: f64,
    models: &[Arc<dyn DecayModel>],
    fit_floor: f64,
) -> Result<DecoherenceEstimate, EvolutionError> {
    if !(0.0 < threshold && threshold < 1.0) {
        return Err(EvolutionError::BadThreshold { threshold });
    }
    if curve.reference() == 0.0 {
        return Err(EvolutionError::DegenerateReference);
    }

    let crossing = curve
        .times()
        .iter()
        .zip(curve.magnitudes())
        .find(|(_, &m)| m <= threshold * curve.reference())
        .map(|(&t, _)| t);

    let floor = fit_floor * curve.reference();
    let points: Vec<(f64, f64)> = curve
        .times()
        .iter()
        .zip(curve.magnitudes())
        .filter(|(_, &m)| m > floor)
        .map(|(&t, &m)| (t, m.ln()))
        .collect();

    let mut fit: Option<ModelFit> = None;
    if points.len() >= 2 {
        for model in models {
            let xs: Vec<f64> = points.iter().map(|(t, _)| model.regressor(*t)).collect();
            let ys: Vec<f64> = points.iter().map(|(_, y)| *y).collect();
            if let Some((slope, intercept, msr)) = linear_fit(&xs, &ys) {
                let candidate = ModelFit {
                    model: model.name().to_string(),
                    amplitude: intercept.exp(),
                    rate: -slope,
                    mean_squared_residual: msr,
                };
                let better = match &fit {
                    None => true,
                    Some(best) => candidate.mean_squared_residual < best.mean_squared_residual,
                };
                if better {
                    fit = Some(candidate);
                }
            }
        }
    }

    Ok(DecoherenceEstimate {
        threshold,
        crossing,
        fit,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let msr = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum::<f64>()
        / n;
    Some((slope, intercept, msr))
}
