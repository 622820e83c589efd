//! Declarative scenario runner.
//!
//! A scenario config is a flat, sectioned key-value file (TOML syntax)
//! describing the grid, the state and observable symbols, the time sweep,
//! and the analysis knobs. The schema is normative: unknown keys are
//! rejected, defaults are documented on the config structs, and identical
//! config + seed produces byte-identical outputs.

mod builtins;
mod output;

pub use builtins::{builtin_scenario, BUILTIN_SCENARIOS};
pub use output::emit_outputs;

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, RegularityThresholds, VanHoveElement};
use crate::evolution::{
    asymptotic_expectation, decay_curve, estimate_decoherence_time, resolvable_band,
    AntidiagonalCorrelation, BandPolicy, DecayCurve, DecayModel, DecayModelRegistry,
    EvolutionError, DEFAULT_BAND_CONSTANT,
};
use crate::grid::{
    build_axis, Atom, AxisSpec, GridError, QuadratureRegistry, SampledFunction, SpectralGrid,
};
use crate::pointer::{
    build_pointer_space, full_diagonal_check, pointer_basis, verify_gns_identity, PointerBasis,
    PointerError,
};
use crate::state::{StateError, StateTolerances, VanHoveState};
use crate::symbols::{
    KernelFamilyRegistry, KernelSpec, ScalarFamilyRegistry, ScalarSpec, SymbolError,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read config `{path}`: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error(
        "[time] t_max {t_max} exceeds the resolvable band {band:.6}; refine the grid or set \
         band_override = true after a refinement check"
    )]
    Band { t_max: f64, band: f64 },
    #[error("[analysis] threshold must lie in (0, 1), got {threshold}")]
    Threshold { threshold: f64 },
    #[error("[time] needs at least 2 samples, got {samples}")]
    Samples { samples: usize },
    #[error("[time] t_max must be positive, got {t_max}")]
    TimeSpan { t_max: f64 },
    #[error("[grid] axis kind must be `continuous` or `atomic`, got `{kind}`")]
    AxisKind { kind: String },
    #[error("[grid] {key} is not a parameter of {kind} axes")]
    AxisParameter {
        kind: &'static str,
        key: &'static str,
    },
    #[error("[state] cannot normalize: ∫ρ̂ dμ = {integral:e}")]
    Normalization { integral: f64 },
    #[error("[grid] {0}")]
    Grid(#[from] GridError),
    #[error("[symbols] {0}")]
    Symbol(#[from] SymbolError),
    #[error("[state] {0}")]
    State(#[from] StateError),
    #[error("[algebra] {0}")]
    Algebra(#[from] AlgebraError),
    #[error("[evolution] {0}")]
    Evolution(#[from] EvolutionError),
    #[error("[pointer] {0}")]
    Pointer(#[from] PointerError),
    #[error("writing outputs: {0}")]
    Output(std::io::Error),
}

fn default_name() -> String {
    "scenario".to_string()
}

fn default_upper() -> f64 {
    10.0
}

fn default_nodes() -> usize {
    128
}

fn default_rule() -> String {
    "gauss_legendre".to_string()
}

fn default_true() -> bool {
    true
}

fn default_t_max() -> f64 {
    6.0
}

fn default_samples() -> usize {
    61
}

fn default_band_constant() -> f64 {
    DEFAULT_BAND_CONSTANT
}

fn default_threshold() -> f64 {
    0.5
}

fn default_fit_models() -> Vec<String> {
    vec!["gaussian".to_string(), "exponential".to_string()]
}

fn default_fit_floor() -> f64 {
    1e-10
}

fn default_refine_tol() -> f64 {
    1e-8
}

fn default_probe_trials() -> usize {
    100
}

fn default_probe_tol() -> f64 {
    1e-8
}

fn default_null_tol() -> f64 {
    crate::pointer::DEFAULT_NULL_TOL
}

/// Top-level scenario config. Defaults: single continuous energy axis on
/// [0, 10] with 128 Gauss–Legendre nodes, threshold 0.5.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grid: GridConfig,
    pub state: StateConfig,
    pub observable: ObservableConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "GridConfig::default_axes")]
    pub axes: Vec<AxisConfig>,
}

impl GridConfig {
    fn default_axes() -> Vec<AxisConfig> {
        vec![AxisConfig {
            kind: "continuous".to_string(),
            lower: None,
            upper: None,
            nodes: None,
            rule: None,
            atom: None,
            atoms: None,
        }]
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            axes: Self::default_axes(),
        }
    }
}

/// One axis declaration. `kind = "continuous"` takes lower (default 0),
/// upper (default 10), nodes (default 128), rule (default gauss_legendre)
/// and an optional attached `atom`; `kind = "atomic"` takes `atoms`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<AtomConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomConfig>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub location: f64,
    pub weight: f64,
}

impl AxisConfig {
    fn to_spec(&self) -> Result<AxisSpec, ScenarioError> {
        match self.kind.as_str() {
            "continuous" => {
                if self.atoms.is_some() {
                    return Err(ScenarioError::AxisParameter {
                        kind: "continuous",
                        key: "atoms",
                    });
                }
                Ok(AxisSpec::Continuous {
                    lower: self.lower.unwrap_or(0.0),
                    upper: self.upper.unwrap_or_else(default_upper),
                    nodes: self.nodes.unwrap_or_else(default_nodes),
                    rule: self.rule.clone().unwrap_or_else(default_rule),
                    atom: self.atom.map(|a| Atom::new(a.location, a.weight)),
                })
            }
            "atomic" => {
                for (opt, key) in [
                    (self.lower.is_some(), "lower"),
                    (self.upper.is_some(), "upper"),
                    (self.nodes.is_some(), "nodes"),
                    (self.rule.is_some(), "rule"),
                    (self.atom.is_some(), "atom"),
                ] {
                    if opt {
                        return Err(ScenarioError::AxisParameter {
                            kind: "atomic",
                            key,
                        });
                    }
                }
                let atoms = self
                    .atoms
                    .clone()
                    .unwrap_or_default()
                    .iter()
                    .map(|a| Atom::new(a.location, a.weight))
                    .collect();
                Ok(AxisSpec::Atomic { atoms })
            }
            other => Err(ScenarioError::AxisKind {
                kind: other.to_string(),
            }),
        }
    }
}

/// State block: per-axis diagonal factors for ρ̂ plus an optional regular
/// kernel. ρ̂ is normalized to unit trace unless `normalize = false`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub diag: Vec<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reg: Option<KernelSpec>,
    #[serde(default = "default_true")]
    pub normalize: bool,
}

/// Observable block: optional diagonal factors and optional regular kernel.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ObservableConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<ScalarSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reg: Option<KernelSpec>,
}

/// Time sweep: `samples` points from 0 to t_max inclusive. t_max must stay
/// within the grid's resolvable band unless `band_override = true`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub band_override: bool,
    #[serde(default = "default_band_constant")]
    pub band_constant: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_max: default_t_max(),
            samples: default_samples(),
            band_override: false,
            band_constant: default_band_constant(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_fit_models")]
    pub fit_models: Vec<String>,
    #[serde(default = "default_fit_floor")]
    pub fit_floor: f64,
    #[serde(default)]
    pub refine: bool,
    #[serde(default = "default_refine_tol")]
    pub refine_tol: f64,
    #[serde(default = "default_probe_trials")]
    pub probe_trials: usize,
    #[serde(default = "default_probe_tol")]
    pub probe_tol: f64,
    /// Assert |value(t_max)|/reference at or below this ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_target: Option<f64>,
    /// Assert the off-diagonal magnitude never moves from its reference
    /// (the bound-state counterexample).
    #[serde(default)]
    pub expect_constant: bool,
    #[serde(default = "default_null_tol")]
    pub null_tol: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            threshold: default_threshold(),
            fit_models: default_fit_models(),
            fit_floor: default_fit_floor(),
            refine: false,
            refine_tol: default_refine_tol(),
            probe_trials: default_probe_trials(),
            probe_tol: default_probe_tol(),
            decay_target: None,
            expect_constant: false,
            null_tol: default_null_tol(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    #[serde(default)]
    pub plot: bool,
}

impl ScenarioConfig {
    /// Parse and semantically validate a config from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        Scenario::prepare(&config)?;
        Ok(config)
    }
}

/// Read, parse, and validate a scenario config file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Read {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioConfig::from_toml_str(&text)
}

/// A fully built scenario: grid, validated state, observable, and sweep.
pub struct Scenario {
    pub grid: Arc<SpectralGrid>,
    pub state: VanHoveState,
    pub observable: VanHoveElement,
    pub times: Vec<f64>,
    pub band: BandPolicy,
    pub models: Vec<Arc<dyn DecayModel>>,
    pub tail_bound: f64,
}

impl Scenario {
    /// Build every piece of the scenario, validating the whole config.
    pub fn prepare(config: &ScenarioConfig) -> Result<Self, ScenarioError> {
        let rules = QuadratureRegistry::builtin();
        let scalars = ScalarFamilyRegistry::builtin();
        let kernels = KernelFamilyRegistry::builtin();
        let model_registry = DecayModelRegistry::builtin();

        if config.time.samples < 2 {
            return Err(ScenarioError::Samples {
                samples: config.time.samples,
            });
        }
        if config.time.t_max <= 0.0 {
            return Err(ScenarioError::TimeSpan {
                t_max: config.time.t_max,
            });
        }
        if !(0.0 < config.analysis.threshold && config.analysis.threshold < 1.0) {
            return Err(ScenarioError::Threshold {
                threshold: config.analysis.threshold,
            });
        }

        let specs: Vec<AxisSpec> = config
            .grid
            .axes
            .iter()
            .map(|a| a.to_spec())
            .collect::<Result<_, _>>()?;
        let grid = SpectralGrid::product(&specs, &rules)?;

        let band_limit = resolvable_band(&grid, config.time.band_constant);
        if config.time.t_max > band_limit && !config.time.band_override {
            return Err(ScenarioError::Band {
                t_max: config.time.t_max,
                band: band_limit,
            });
        }
        let band = BandPolicy {
            limit: band_limit,
            allow_beyond: config.time.band_override,
        };

        let models: Vec<Arc<dyn DecayModel>> = config
            .analysis
            .fit_models
            .iter()
            .map(|name| model_registry.get(name))
            .collect::<Result<_, _>>()?;

        // State: sampled diagonal (normalized by default) plus kernel.
        let mut diag = scalars.build_sampled(&grid, &config.state.diag)?;
        if config.state.normalize {
            let integral = grid.integrate(&diag)?.re;
            if integral <= 0.0 || !integral.is_finite() {
                return Err(ScenarioError::Normalization { integral });
            }
            diag = diag.map(move |v| v / integral);
        }
        let reg = match &config.state.reg {
            Some(spec) => kernels.build(&grid, spec, &scalars)?,
            None => nalgebra::DMatrix::zeros(grid.len(), grid.len()),
        };
        let state = VanHoveState::new(&diag, reg, &StateTolerances::default())?;

        // Observable.
        let obs_diag = match &config.observable.diag {
            Some(factors) => scalars.build_sampled(&grid, factors)?,
            None => SampledFunction::zeros(&grid),
        };
        let obs_reg = match &config.observable.reg {
            Some(spec) => kernels.build(&grid, spec, &scalars)?,
            None => nalgebra::DMatrix::zeros(grid.len(), grid.len()),
        };
        let observable = VanHoveElement::new(obs_diag, obs_reg)?;

        let step = config.time.t_max / (config.time.samples - 1) as f64;
        let times: Vec<f64> = (0..config.time.samples)
            .map(|k| {
                if k + 1 == config.time.samples {
                    config.time.t_max
                } else {
                    k as f64 * step
                }
            })
            .collect();

        let tail_bound = truncation_tail(config, &scalars, &rules)?;

        Ok(Self {
            grid,
            state,
            observable,
            times,
            band,
            models,
            tail_bound,
        })
    }
}

/// Relative truncation-tail estimate for the scenario symbols.
///
/// For each energy-axis factor entering the run (ρ̂, â, and the product of
/// the two rank-one reg profiles), the mass on the extension
/// [ω_max, 2ω_max − lower] is integrated against the mass on the truncated
/// interval; the worst ratio is reported. Atomic kernels carry no continuum
/// tail.
fn truncation_tail(
    config: &ScenarioConfig,
    scalars: &ScalarFamilyRegistry,
    rules: &QuadratureRegistry,
) -> Result<f64, ScenarioError> {
    let (lower, upper) = match config.grid.axes[0].to_spec()? {
        AxisSpec::Continuous { lower, upper, .. } => (lower, upper),
        AxisSpec::Atomic { .. } => return Ok(0.0),
    };
    let main = build_axis(&AxisSpec::continuous(lower, upper, 256), rules)?;
    let ext = build_axis(
        &AxisSpec::continuous(upper, upper + (upper - lower), 64),
        rules,
    )?;

    let mut factors: Vec<Vec<&ScalarSpec>> = Vec::new();
    factors.push(vec![&config.state.diag[0]]);
    if let Some(diag) = &config.observable.diag {
        factors.push(vec![&diag[0]]);
    }
    let state_profile = config
        .state
        .reg
        .as_ref()
        .filter(|k| !k.profile.is_empty())
        .map(|k| &k.profile[0]);
    let obs_profile = config
        .observable
        .reg
        .as_ref()
        .filter(|k| !k.profile.is_empty())
        .map(|k| &k.profile[0]);
    if let (Some(s), Some(o)) = (state_profile, obs_profile) {
        factors.push(vec![s, o]);
    }

    let mut worst: f64 = 0.0;
    for group in factors {
        let families = group
            .iter()
            .map(|s| scalars.get(&s.family))
            .collect::<Result<Vec<_>, _>>()?;
        let eval = |x: f64| -> f64 {
            families
                .iter()
                .zip(&group)
                .map(|(f, s)| f.evaluate(s, x))
                .product::<f64>()
                .abs()
        };
        let mass: f64 = main
            .positions
            .iter()
            .zip(&main.weights)
            .map(|(&x, &w)| w * eval(x))
            .sum();
        let tail: f64 = ext
            .positions
            .iter()
            .zip(&ext.weights)
            .map(|(&x, &w)| w * eval(x))
            .sum();
        if mass > 0.0 {
            worst = worst.max(tail / mass);
        }
    }
    Ok(worst)
}

/// Per-run switches layered on top of the config by the CLI.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub refine: bool,
}

/// Everything a finished run produces.
pub struct ScenarioRun {
    pub summary: RunSummary,
    pub curve: DecayCurve,
    pub basis: PointerBasis,
}

/// Flat summary of residuals and analysis results; `failures` lists every
/// violated invariant (empty on a clean run).
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub grid_nodes: usize,
    pub resolvable_band: f64,
    pub normalization_residual: f64,
    pub hermiticity_residual: f64,
    pub min_probe_positivity: f64,
    pub decay_reference: f64,
    pub final_abs_over_ref: f64,
    pub decoherence_time: Option<f64>,
    pub fit_model: Option<String>,
    pub fit_amplitude: Option<f64>,
    pub fit_rate: Option<f64>,
    pub fit_residual: Option<f64>,
    pub truncation_tail_bound: f64,
    pub path_agreement_residual: f64,
    pub grid_refinement_delta: Option<f64>,
    pub pointer_identity_residual: f64,
    pub state_regularity: String,
    pub observable_regularity: String,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

/// Execute a scenario: build, validate, sweep, analyze, and collect the
/// summary. Soft invariant violations land in `summary.failures`; hard
/// construction errors abort with a tagged [`ScenarioError`].
pub fn run_scenario(
    config: &ScenarioConfig,
    options: &RunOptions,
) -> Result<ScenarioRun, ScenarioError> {
    let scenario = Scenario::prepare(config)?;
    let seed = options.seed.unwrap_or(config.seed);
    let mut notes = Vec::new();
    let mut failures = Vec::new();

    let state = &scenario.state;
    let observable = &scenario.observable;

    // Residual assertions against the state tolerances (conditions 6'/3').
    let state_tol = StateTolerances::default();
    if state.normalization_residual() > state_tol.normalization {
        failures.push(format!(
            "state: normalization condition 6' violated, |trace - 1| = {:e}",
            state.normalization_residual()
        ));
    }
    if state.hermiticity_residual() > state_tol.hermiticity {
        failures.push(format!(
            "state: hermiticity condition 3' violated, deviation {:e}",
            state.hermiticity_residual()
        ));
    }

    // Advisory regularity classification.
    let thresholds = RegularityThresholds::default();
    let state_report = state.to_element().classify_regularity(&thresholds)?;
    let obs_report = observable.classify_regularity(&thresholds)?;
    let regularity_tag = |regular: bool| {
        if regular {
            "regular".to_string()
        } else {
            "suspect".to_string()
        }
    };

    // Decay sweep (direct oscillatory sums).
    let curve = decay_curve(
        state,
        observable,
        &scenario.times,
        &scenario.band,
        scenario.tail_bound,
    )?;

    // Accelerated anti-diagonal path as the independent cross-check.
    let mut path_residual: f64 = 0.0;
    {
        let correlation = AntidiagonalCorrelation::new(state, observable)?;
        let scale = curve.reference().max(f64::MIN_POSITIVE);
        for (&t, &v) in scenario.times.iter().zip(curve.values()) {
            let fast = correlation.evaluate(t);
            path_residual = path_residual.max((fast - v).norm() / scale);
        }
    }
    if path_residual > 1e-10 {
        failures.push(format!(
            "evolution: accelerated path deviates from the direct sum by {path_residual:e} (limit 1e-10)"
        ));
    }

    // Threshold crossing and descriptive fit.
    let (decoherence_time, fit) = match estimate_decoherence_time(
        &curve,
        config.analysis.threshold,
        &scenario.models,
        config.analysis.fit_floor,
    ) {
        Ok(estimate) => (estimate.crossing, estimate.fit),
        Err(EvolutionError::DegenerateReference) => {
            notes.push("degenerate decay curve: regular parts vanish at t = 0".to_string());
            (None, None)
        }
        Err(e) => return Err(e.into()),
    };

    if let Some(target) = config.analysis.decay_target {
        if curve.reference() == 0.0 {
            notes.push("decay target skipped: degenerate reference".to_string());
        } else if curve.final_ratio() > target {
            failures.push(format!(
                "evolution: final |value|/reference {:e} exceeds the decay target {target:e}",
                curve.final_ratio()
            ));
        }
    }
    if config.analysis.expect_constant {
        let reference = curve.reference();
        let deviation = curve
            .magnitudes()
            .iter()
            .map(|&m| (m - reference).abs())
            .fold(0.0, f64::max);
        if deviation > 1e-12 * reference.max(1.0) {
            failures.push(format!(
                "evolution: off-diagonal magnitude moved by {deviation:e} but the scenario expects a constant term"
            ));
        } else {
            notes.push(
                "constant off-diagonal atom term: ω = ω′ on the atom kills the phase".to_string(),
            );
        }
    }

    // Positivity probe.
    let probe = state.positivity_probe(
        config.analysis.probe_trials,
        seed,
        config.analysis.probe_tol,
    );
    if probe.failed {
        failures.push(format!(
            "state: positivity probe found ρ(b*b) = {:e} below -{:e} (trial {})",
            probe.min_real, probe.tol, probe.worst_trial
        ));
    }

    // Pointer construction and identities.
    let space = build_pointer_space(state, config.analysis.null_tol)?;
    let basis = pointer_basis(&space)?;
    let identity = VanHoveElement::identity(&scenario.grid);
    let hamiltonian = VanHoveElement::hamiltonian(&scenario.grid);
    let obs_diag_part = VanHoveElement::diagonal(&SampledFunction::from_values(
        &scenario.grid,
        observable.diag().iter().cloned().collect(),
    )?);
    let mut pointer_residual: f64 = 0.0;
    for element in [&identity, &hamiltonian, &obs_diag_part] {
        pointer_residual = pointer_residual.max(verify_gns_identity(element, state, &space)?);
    }
    match full_diagonal_check(state, observable, &space) {
        Ok(residual) => pointer_residual = pointer_residual.max(residual),
        Err(PointerError::Evolution(EvolutionError::NotSymmetric)) => {
            notes.push("observable is not symmetric: asymptotic comparison skipped".to_string());
        }
        Err(e) => return Err(e.into()),
    }
    if pointer_residual > 1e-12 {
        failures.push(format!(
            "pointer: identity residual {pointer_residual:e} exceeds 1e-12"
        ));
    }

    // Optional grid-refinement check: double every continuous axis and
    // compare the trusted quantities.
    let mut refinement_delta = None;
    if options.refine || config.analysis.refine {
        let mut refined_config = config.clone();
        for axis in &mut refined_config.grid.axes {
            if axis.kind == "continuous" {
                axis.nodes = Some(axis.nodes.unwrap_or_else(default_nodes) * 2);
            }
        }
        let refined = Scenario::prepare(&refined_config)?;
        let trusted: Vec<f64> = scenario
            .times
            .iter()
            .cloned()
            .filter(|&t| t <= scenario.band.limit)
            .collect();
        let refined_band = BandPolicy {
            limit: scenario.band.limit,
            allow_beyond: true,
        };
        let refined_curve = decay_curve(
            &refined.state,
            &refined.observable,
            &trusted,
            &refined_band,
            refined.tail_bound,
        )?;
        let scale = curve
            .reference()
            .max(refined_curve.reference())
            .max(f64::MIN_POSITIVE);
        let mut delta: f64 = 0.0;
        for (k, &t) in trusted.iter().enumerate() {
            debug_assert_eq!(t, scenario.times[k]);
            delta = delta.max((refined_curve.values()[k] - curve.values()[k]).norm() / scale);
        }
        let asym = asymptotic_value(state, observable);
        let asym_refined = asymptotic_value(&refined.state, &refined.observable);
        if let (Some(a), Some(b)) = (asym, asym_refined) {
            let scale = a.abs().max(curve.reference()).max(1.0);
            delta = delta.max((a - b).abs() / scale);
        }
        if delta > config.analysis.refine_tol {
            failures.push(format!(
                "refinement: doubling the grid moved results by {delta:e} (limit {:e})",
                config.analysis.refine_tol
            ));
        }
        refinement_delta = Some(delta);
    }

    let summary = RunSummary {
        scenario: config.name.clone(),
        seed,
        grid_nodes: scenario.grid.len(),
        resolvable_band: scenario.band.limit,
        normalization_residual: state.normalization_residual(),
        hermiticity_residual: state.hermiticity_residual(),
        min_probe_positivity: probe.min_real,
        decay_reference: curve.reference(),
        final_abs_over_ref: curve.final_ratio(),
        decoherence_time,
        fit_model: fit.as_ref().map(|f| f.model.clone()),
        fit_amplitude: fit.as_ref().map(|f| f.amplitude),
        fit_rate: fit.as_ref().map(|f| f.rate),
        fit_residual: fit.as_ref().map(|f| f.mean_squared_residual),
        truncation_tail_bound: scenario.tail_bound,
        path_agreement_residual: path_residual,
        grid_refinement_delta: refinement_delta,
        pointer_identity_residual: pointer_residual,
        state_regularity: regularity_tag(state_report.is_regular()),
        observable_regularity: regularity_tag(obs_report.is_regular()),
        notes,
        failures,
    };

    Ok(ScenarioRun {
        summary,
        curve,
        basis,
    })
}

fn asymptotic_value(state: &VanHoveState, observable: &VanHoveElement) -> Option<f64> {
    asymptotic_expectation(state, observable).ok()
}
