//! Built-in symbol families for scenario construction.
//!
//! Scenario configs never carry arbitrary expressions; every ρ̂, â and
//! kernel profile is generated by a named, parameterized family so the
//! provenance of each test function stays auditable. Scalar families
//! produce one-variable factors (one per grid axis, multiplied into the
//! sampled symbol); kernel families produce the two-variable regular
//! kernels.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{SampledFunction, SpectralGrid};

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("unknown scalar family `{name}` (known families: {known})")]
    UnknownScalarFamily { name: String, known: String },
    #[error("unknown kernel family `{name}` (known families: {known})")]
    UnknownKernelFamily { name: String, known: String },
    #[error("family `{family}`: {message}")]
    BadParameter { family: String, message: String },
    #[error("the grid has {expected} axes but the symbol lists {got} factors")]
    FactorArity { expected: usize, got: usize },
    #[error("family `atom_spike` needs an atom on the energy axis")]
    NoEnergyAtom,
}

fn default_width() -> f64 {
    1.0
}

fn default_amplitude() -> f64 {
    1.0
}

/// Declaration of a one-variable symbol factor: a family name plus its
/// parameters. Unused parameters are rejected per family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarSpec {
    pub family: String,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

/// A one-variable symbol generator.
pub trait ScalarFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    /// Reject invalid parameter combinations for this family.
    fn validate(&self, spec: &ScalarSpec) -> Result<(), SymbolError>;

    fn evaluate(&self, spec: &ScalarSpec, x: f64) -> f64;
}

/// amplitude·exp(−(x−center)²/(2·width²)).
pub struct GaussianFamily;

impl ScalarFamily for GaussianFamily {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn describe(&self) -> &'static str {
        "gaussian(center, width): amplitude*exp(-(x-center)^2/(2 width^2))"
    }

    fn validate(&self, spec: &ScalarSpec) -> Result<(), SymbolError> {
        if spec.width <= 0.0 {
            return Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: format!("width must be positive, got {}", spec.width),
            });
        }
        if spec.window.is_some() {
            return Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: "gaussian takes no window parameter".into(),
            });
        }
        Ok(())
    }

    fn evaluate(&self, spec: &ScalarSpec, x: f64) -> f64 {
        let d = x - spec.center;
        spec.amplitude * (-d * d / (2.0 * spec.width * spec.width)).exp()
    }
}

/// amplitude·width²/((x−center)²+width²)·exp(−((x−center)/window)²).
///
/// The gaussian window restores Schwartz-class decay that a bare Lorentzian
/// lacks.
pub struct LorentzianWindowedFamily;

impl ScalarFamily for LorentzianWindowedFamily {
    fn name(&self) -> &'static str {
        "lorentzian_windowed"
    }

    fn describe(&self) -> &'static str {
        "lorentzian_windowed(center, width, window): gaussian-windowed Lorentzian line"
    }

    fn validate(&self, spec: &ScalarSpec) -> Result<(), SymbolError> {
        if spec.width <= 0.0 {
            return Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: format!("width must be positive, got {}", spec.width),
            });
        }
        match spec.window {
            None => Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: "window parameter is required".into(),
            }),
            Some(w) if w <= 0.0 => Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: format!("window must be positive, got {w}"),
            }),
            Some(_) => Ok(()),
        }
    }

    fn evaluate(&self, spec: &ScalarSpec, x: f64) -> f64 {
        let d = x - spec.center;
        let w2 = spec.width * spec.width;
        let window = spec.window.expect("validated");
        spec.amplitude * w2 / (d * d + w2) * (-(d / window) * (d / window)).exp()
    }
}

/// Name-keyed registry of scalar families.
#[derive(Clone)]
pub struct ScalarFamilyRegistry {
    families: BTreeMap<&'static str, Arc<dyn ScalarFamily>>,
}

impl ScalarFamilyRegistry {
    pub fn builtin() -> Self {
        let mut reg = Self {
            families: BTreeMap::new(),
        };
        reg.register(Arc::new(GaussianFamily));
        reg.register(Arc::new(LorentzianWindowedFamily));
        reg
    }

    pub fn register(&mut self, family: Arc<dyn ScalarFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ScalarFamily>, SymbolError> {
        self.families
            .get(name)
            .cloned()
            .ok_or_else(|| SymbolError::UnknownScalarFamily {
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    /// Validate one factor per grid axis.
    pub fn validate_factors(
        &self,
        grid_dim: usize,
        factors: &[ScalarSpec],
    ) -> Result<(), SymbolError> {
        if factors.len() != grid_dim {
            return Err(SymbolError::FactorArity {
                expected: grid_dim,
                got: factors.len(),
            });
        }
        for spec in factors {
            self.get(&spec.family)?.validate(spec)?;
        }
        Ok(())
    }

    /// Sample the product of per-axis factors over the grid.
    pub fn build_sampled(
        &self,
        grid: &Arc<SpectralGrid>,
        factors: &[ScalarSpec],
    ) -> Result<SampledFunction, SymbolError> {
        self.validate_factors(grid.dim(), factors)?;
        let families: Vec<Arc<dyn ScalarFamily>> = factors
            .iter()
            .map(|s| self.get(&s.family))
            .collect::<Result<_, _>>()?;
        Ok(SampledFunction::from_real_fn(grid, move |coords| {
            coords
                .iter()
                .zip(families.iter().zip(factors))
                .map(|(&x, (fam, spec))| fam.evaluate(spec, x))
                .product()
        }))
    }
}

impl Default for ScalarFamilyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Declaration of a regular kernel: a kernel family plus its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub family: String,
    /// Per-axis profile factors (rank1).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub profile: Vec<ScalarSpec>,
    /// Kernel amplitude (atom_spike).
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

/// A two-variable regular-kernel generator.
pub trait KernelFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn build(
        &self,
        grid: &Arc<SpectralGrid>,
        spec: &KernelSpec,
        scalars: &ScalarFamilyRegistry,
    ) -> Result<DMatrix<Complex64>, SymbolError>;
}

/// v ⊗ v̄ from a per-axis profile: kernel(Ω,Ω′) = v(Ω)·v(Ω′) with real v.
/// Hermitian and positive by construction.
pub struct RankOneFamily;

impl KernelFamily for RankOneFamily {
    fn name(&self) -> &'static str {
        "rank1"
    }

    fn describe(&self) -> &'static str {
        "rank1(profile): v(Ω)·v(Ω′) from the per-axis profile factors"
    }

    fn build(
        &self,
        grid: &Arc<SpectralGrid>,
        spec: &KernelSpec,
        scalars: &ScalarFamilyRegistry,
    ) -> Result<DMatrix<Complex64>, SymbolError> {
        if spec.profile.is_empty() {
            return Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: "rank1 needs a profile".into(),
            });
        }
        let v = scalars.build_sampled(grid, &spec.profile)?;
        let n = grid.len();
        Ok(DMatrix::from_fn(n, n, |i, j| {
            v.value(i) * v.value(j).conj()
        }))
    }
}

/// Point-mass kernel on the energy-axis atom: amplitude wherever both
/// arguments sit on the atom energy. The ω = ω′ diagonal carries no phase,
/// so this kernel never decays — the bound-state counterexample.
pub struct AtomSpikeFamily;

impl KernelFamily for AtomSpikeFamily {
    fn name(&self) -> &'static str {
        "atom_spike"
    }

    fn describe(&self) -> &'static str {
        "atom_spike(amplitude): constant kernel on the energy-atom block"
    }

    fn build(
        &self,
        grid: &Arc<SpectralGrid>,
        spec: &KernelSpec,
        _scalars: &ScalarFamilyRegistry,
    ) -> Result<DMatrix<Complex64>, SymbolError> {
        if !spec.profile.is_empty() {
            return Err(SymbolError::BadParameter {
                family: self.name().into(),
                message: "atom_spike takes no profile".into(),
            });
        }
        if !(0..grid.len()).any(|i| grid.energy_is_atom(i)) {
            return Err(SymbolError::NoEnergyAtom);
        }
        let n = grid.len();
        let amp = Complex64::new(spec.amplitude, 0.0);
        Ok(DMatrix::from_fn(n, n, |i, j| {
            if grid.energy_is_atom(i) && grid.energy_is_atom(j) {
                amp
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }
}

/// Name-keyed registry of kernel families.
#[derive(Clone)]
pub struct KernelFamilyRegistry {
    families: BTreeMap<&'static str, Arc<dyn KernelFamily>>,
}

impl KernelFamilyRegistry {
    pub fn builtin() -> Self {
        let mut reg = Self {
            families: BTreeMap::new(),
        };
        reg.register(Arc::new(RankOneFamily));
        reg.register(Arc::new(AtomSpikeFamily));
        reg
    }

    pub fn register(&mut self, family: Arc<dyn KernelFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn KernelFamily>, SymbolError> {
        self.families
            .get(name)
            .cloned()
            .ok_or_else(|| SymbolError::UnknownKernelFamily {
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn build(
        &self,
        grid: &Arc<SpectralGrid>,
        spec: &KernelSpec,
        scalars: &ScalarFamilyRegistry,
    ) -> Result<DMatrix<Complex64>, SymbolError> {
        self.get(&spec.family)?.build(grid, spec, scalars)
    }
}

impl Default for KernelFamilyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
