//! Built-in scenario library.
//!
//! Each entry is a complete config in the documented schema; `run` and
//! `validate` accept the names below wherever a config path is expected.

/// A named, embedded scenario config.
pub struct BuiltinScenario {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
}

/// Pure-continuum Gaussian pair: the flagship Riemann–Lebesgue decay run.
///
/// Unit-width Gaussians centered mid-interval; the reg-pair integrand is
/// (1/2)e^{-(ω-5)²} per variable, so the static off-diagonal value is π/4
/// (up to an erf(5) truncation correction ≈ 3e-12) and |value| falls like
/// e^{-t²/2} down to the noise floor.
const GAUSSIAN_UNIT: &str = r#"
name = "gaussian_unit"
seed = 7

[[grid.axes]]
kind = "continuous"
lower = 0.0
upper = 10.0
nodes = 128

[state]
diag = [{ family = "gaussian", center = 5.0, width = 1.0 }]
reg = { family = "rank1", profile = [{ family = "gaussian", center = 5.0, width = 1.0, amplitude = 0.7071067811865476 }] }

[observable]
diag = [{ family = "gaussian", center = 4.0, width = 1.0 }]
reg = { family = "rank1", profile = [{ family = "gaussian", center = 5.0, width = 1.0, amplitude = 0.7071067811865476 }] }

[time]
t_max = 12.0
samples = 121
band_override = true

[analysis]
threshold = 0.5
decay_target = 1e-6
"#;

/// Gaussian-windowed Lorentzian line: slower, exponential-flavored decay.
const LORENTZIAN_WINDOW: &str = r#"
name = "lorentzian_window"
seed = 11

[[grid.axes]]
kind = "continuous"
lower = 0.0
upper = 10.0
nodes = 128

[state]
diag = [{ family = "gaussian", center = 5.0, width = 1.0 }]
reg = { family = "rank1", profile = [{ family = "lorentzian_windowed", center = 5.0, width = 0.5, window = 2.0 }] }

[observable]
diag = [{ family = "gaussian", center = 4.0, width = 1.0 }]
reg = { family = "rank1", profile = [{ family = "lorentzian_windowed", center = 5.0, width = 0.5, window = 2.0 }] }

[time]
t_max = 12.0
samples = 121
band_override = true

[analysis]
threshold = 0.5
decay_target = 1e-3
"#;

/// Continuum plus one bound state, regular kernels supported on the atom
/// block only: the documented counterexample where nothing decays.
const ATOM_PAIR: &str = r#"
name = "atom_pair"
seed = 13

[[grid.axes]]
kind = "continuous"
lower = 1.0
upper = 10.0
nodes = 96
atom = { location = 0.5, weight = 1.0 }

[state]
diag = [{ family = "gaussian", center = 5.0, width = 1.0 }]
reg = { family = "atom_spike", amplitude = 0.25 }

[observable]
diag = [{ family = "gaussian", center = 5.0, width = 1.0 }]
reg = { family = "atom_spike", amplitude = 0.5 }

[time]
t_max = 12.0
samples = 121
band_override = true

[analysis]
expect_constant = true
"#;

/// Energy axis times one atomic observable axis (N = 1): decay in the
/// energy index with the atomic factor riding along.
const MULTI_INDEX: &str = r#"
name = "multi_index"
seed = 17

[[grid.axes]]
kind = "continuous"
lower = 0.0
upper = 10.0
nodes = 128

[[grid.axes]]
kind = "atomic"
atoms = [{ location = -1.0, weight = 1.0 }, { location = 1.0, weight = 1.0 }]

[state]
diag = [{ family = "gaussian", center = 5.0, width = 1.0 }, { family = "gaussian", center = 1.0, width = 1.0 }]
reg = { family = "rank1", profile = [{ family = "gaussian", center = 5.0, width = 1.0, amplitude = 0.7071067811865476 }, { family = "gaussian", center = 1.0, width = 1.0 }] }

[observable]
diag = [{ family = "gaussian", center = 4.0, width = 1.0 }, { family = "gaussian", center = -1.0, width = 1.0 }]
reg = { family = "rank1", profile = [{ family = "gaussian", center = 5.0, width = 1.0, amplitude = 0.7071067811865476 }, { family = "gaussian", center = 0.0, width = 1.0 }] }

[time]
t_max = 12.0
samples = 121
band_override = true

[analysis]
threshold = 0.5
decay_target = 1e-6
"#;

/// Purely diagonal state and observable: the degenerate curve (identically
/// zero reference) exercising the report-only analysis path.
const DIAG_ONLY: &str = r#"
name = "diag_only"
seed = 19

[[grid.axes]]
kind = "continuous"
lower = 0.0
upper = 10.0
nodes = 128

[state]
diag = [{ family = "gaussian", center = 5.0, width = 1.0 }]

[observable]
diag = [{ family = "gaussian", center = 4.0, width = 1.0 }]
"#;

pub const BUILTIN_SCENARIOS: &[BuiltinScenario] = &[
    BuiltinScenario {
        name: "gaussian_unit",
        description: "pure-continuum Gaussian pair; static value π/4, gaussian-law decay",
        toml: GAUSSIAN_UNIT,
    },
    BuiltinScenario {
        name: "lorentzian_window",
        description: "gaussian-windowed Lorentzian line; exponential-flavored decay",
        toml: LORENTZIAN_WINDOW,
    },
    BuiltinScenario {
        name: "atom_pair",
        description: "continuum + bound state; atom-block kernel stays constant (no decay)",
        toml: ATOM_PAIR,
    },
    BuiltinScenario {
        name: "multi_index",
        description: "energy × atomic observable axis (N = 1); decay in the energy index",
        toml: MULTI_INDEX,
    },
    BuiltinScenario {
        name: "diag_only",
        description: "diagonal-only state and observable; degenerate zero curve",
        toml: DIAG_ONLY,
    },
];

/// Look up a built-in scenario by name.
pub fn builtin_scenario(name: &str) -> Option<&'static BuiltinScenario> {
    BUILTIN_SCENARIOS.iter().find(|s| s.name == name)
}
