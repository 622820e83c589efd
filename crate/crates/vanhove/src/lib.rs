//! Numerical laboratory for decoherence in the van Hove algebra.
//!
//! Operators over a continuous energy spectrum are represented as kernel
//! pairs a = â + a_r: a diagonal symbol â(Ω) standing for the semiregular
//! kernel â(Ω)δ(ω−ω′) plus a regular two-variable kernel a_r(Ω,Ω′). On a
//! discretized spectrum Λ with quadrature measure μ this becomes an exact
//! finite-dimensional *-algebra whose evolution phases only the regular
//! kernels. Pairing evolved observables against states produces oscillatory
//! double sums that die out in time — the Riemann–Lebesgue mechanism behind
//! decoherence — while the diagonal parts stay frozen, and the surviving
//! diagonal data generates a GNS space whose indicator basis is the final
//! pointer basis.
//!
//! Module map:
//! - [`grid`]: spectral discretization — axes, product measures, quadrature
//!   rules (name-keyed registry), sampled functions, Schwartz seminorms.
//! - [`algebra`]: the van Hove algebra — products with analytic δ
//!   contraction, star, commutators, regularity classification.
//! - [`state`]: states ρ = ρ̂ + ρ_r with positivity/hermiticity/trace
//!   validation and expectation pairing.
//! - [`evolution`]: the evolution automorphism, decay curves, the
//!   resolvable-band guard, the accelerated anti-diagonal path, and the
//!   decay-model fits.
//! - [`pointer`]: the GNS pointer space, representation, and pointer basis.
//! - [`symbols`]: named symbol families (scalar and kernel registries) that
//!   scenario configs draw from.
//! - [`scenario`]: declarative scenario configs, the runner, built-in
//!   scenario library, and bit-stable CSV/JSON/SVG outputs.
//!
//! Everything is immutable after construction; grids, elements, and states
//! can be shared across threads freely, and each decay-curve sample is an
//! independent pure computation.
//!
//! ```
//! use nalgebra::DMatrix;
//! use vanhove::algebra::VanHoveElement;
//! use vanhove::evolution::{decay_curve, BandPolicy, DEFAULT_BAND_CONSTANT};
//! use vanhove::grid::{AxisSpec, QuadratureRegistry, SampledFunction, SpectralGrid};
//! use vanhove::state::{StateTolerances, VanHoveState};
//!
//! // Discretize the energy half-line, truncated to [0, 10].
//! let rules = QuadratureRegistry::builtin();
//! let grid = SpectralGrid::single_axis(AxisSpec::continuous(0.0, 10.0, 96), &rules)?;
//!
//! // A normalized diagonal density and a rank-one regular kernel.
//! let raw = SampledFunction::from_real_fn(&grid, |x| (-x[0]).exp());
//! let trace = grid.integrate(&raw)?.re;
//! let rho_hat = raw.map(move |v| v / trace);
//! let g = SampledFunction::from_real_fn(&grid, |x| (-0.5 * (x[0] - 5.0) * (x[0] - 5.0)).exp());
//! let n = grid.len();
//! let kernel = DMatrix::from_fn(n, n, |i, j| g.value(i) * g.value(j).conj());
//! let rho = VanHoveState::new(&rho_hat, kernel.clone(), &StateTolerances::default())?;
//! let a = VanHoveElement::new(SampledFunction::zeros(&grid), kernel)?;
//!
//! // Sweep the off-diagonal expectation: Riemann–Lebesgue decay in action.
//! let times: Vec<f64> = (0..=40).map(|k| k as f64 * 0.1).collect();
//! let band = BandPolicy::for_grid(&grid, DEFAULT_BAND_CONSTANT);
//! let curve = decay_curve(&rho, &a, &times, &band, 0.0)?;
//! assert!(curve.reference() > 0.0);
//! assert!(curve.final_ratio() < 1e-3);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod algebra;
pub mod evolution;
pub mod grid;
pub mod pointer;
pub mod scenario;
pub mod state;
pub mod symbols;
