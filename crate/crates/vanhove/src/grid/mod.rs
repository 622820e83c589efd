//! Discretization of the CSCO spectrum Λ = Λ₁ × … × Λ_{N+1} and its measure μ.
//!
//! Axis 0 always carries the energy ω and is continuous (truncated to
//! [lower, ω_max], optionally with a single attached atom for a bound
//! state). Further axes are continuous or atomic. The product grid stores
//! one quadrature weight per multi-index node, so integration over Λ is a
//! weighted sum and the generalized eigenvectors |Ω⟩ are realized as
//! grid-point indicators.

mod quadrature;
mod seminorm;

pub use quadrature::{CompositeGaussLegendre, QuadratureRegistry, QuadratureRule, Trapezoid};
pub use seminorm::{fd_weights, MAX_DERIVATIVE, STENCIL};

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

/// Errors from grid construction and grid-bound evaluation.
#[derive(Debug, Error)]
pub enum GridError {
    #[error("axis needs at least 2 nodes, got {n}")]
    NodeCount { n: usize },
    #[error("invalid interval: lower {lower} must be finite and below upper {upper}")]
    BadInterval { lower: f64, upper: f64 },
    #[error("unknown quadrature rule `{name}` (known rules: {known})")]
    UnknownRule { name: String, known: String },
    #[error("invalid atoms: {0}")]
    BadAtoms(String),
    #[error("a grid needs at least one axis")]
    EmptyAxes,
    #[error("axis 0 carries the energy and must be continuous (an attached atom is allowed)")]
    EnergyAxisKind,
    #[error("only the energy axis may carry an attached atom, found one on axis {axis}")]
    AtomOffEnergyAxis { axis: usize },
    #[error("continuous axes live on the nonnegative half-line, got {value}")]
    NegativeEnergy { value: f64 },
    #[error("duplicate node position {value} on axis {axis}")]
    DuplicateNode { axis: usize, value: f64 },
    #[error("sampled function belongs to a different grid")]
    GridMismatch,
    #[error("expected {expected} values for this grid, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("seminorms are defined on a single continuous axis, this grid has {dim}")]
    NotOneDimensional { dim: usize },
    #[error("derivative order {m} exceeds the stencil support (max {max})")]
    StencilOrder { m: usize, max: usize },
}

/// A point mass of the spectral measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

impl Atom {
    pub fn new(location: f64, weight: f64) -> Self {
        Self { location, weight }
    }
}

/// Declaration of one spectral axis.
#[derive(Debug, Clone)]
pub enum AxisSpec {
    /// Absolutely continuous interval [lower, upper], discretized with `nodes`
    /// points of the named quadrature rule. The energy axis may attach a
    /// single atom (an isolated bound state) alongside the continuum.
    Continuous {
        lower: f64,
        upper: f64,
        nodes: usize,
        rule: String,
        atom: Option<Atom>,
    },
    /// Purely atomic axis: finite list of (location, weight) point masses.
    Atomic { atoms: Vec<Atom> },
}

impl AxisSpec {
    /// Continuous axis with the default Gauss–Legendre rule.
    pub fn continuous(lower: f64, upper: f64, nodes: usize) -> Self {
        AxisSpec::Continuous {
            lower,
            upper,
            nodes,
            rule: "gauss_legendre".to_string(),
            atom: None,
        }
    }

    pub fn atomic(atoms: Vec<Atom>) -> Self {
        AxisSpec::Atomic { atoms }
    }

    pub fn with_atom(self, atom: Atom) -> Self {
        match self {
            AxisSpec::Continuous {
                lower,
                upper,
                nodes,
                rule,
                ..
            } => AxisSpec::Continuous {
                lower,
                upper,
                nodes,
                rule,
                atom: Some(atom),
            },
            other => other,
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, AxisSpec::Continuous { .. })
    }
}

/// Nodes of one built axis, ascending, with per-node measure weights.
#[derive(Debug, Clone)]
pub struct AxisNodes {
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
    /// True where the node is a point mass rather than a quadrature node.
    pub is_atom: Vec<bool>,
}

impl AxisNodes {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Build a single axis: quadrature nodes/weights for continuous axes, the
/// atoms verbatim for atomic axes. Attached atoms are merged in ascending
/// position order.
pub fn build_axis(spec: &AxisSpec, rules: &QuadratureRegistry) -> Result<AxisNodes, GridError> {
    match spec {
        AxisSpec::Continuous {
            lower,
            upper,
            nodes,
            rule,
            atom,
        } => {
            if *lower < 0.0 {
                return Err(GridError::NegativeEnergy { value: *lower });
            }
            let rule = rules.get(rule)?;
            let (x, w) = rule.nodes_weights(*lower, *upper, *nodes)?;
            let mut positions = x;
            let mut weights = w;
            let mut is_atom = vec![false; positions.len()];
            if let Some(a) = atom {
                if a.location < 0.0 {
                    return Err(GridError::NegativeEnergy { value: a.location });
                }
                if a.weight <= 0.0 {
                    return Err(GridError::BadAtoms(format!(
                        "atom weight must be positive, got {}",
                        a.weight
                    )));
                }
                let idx = positions.partition_point(|&p| p < a.location);
                if positions.get(idx) == Some(&a.location) {
                    return Err(GridError::DuplicateNode {
                        axis: 0,
                        value: a.location,
                    });
                }
                positions.insert(idx, a.location);
                weights.insert(idx, a.weight);
                is_atom.insert(idx, true);
            }
            Ok(AxisNodes {
                positions,
                weights,
                is_atom,
            })
        }
        AxisSpec::Atomic { atoms } => {
            if atoms.is_empty() {
                return Err(GridError::BadAtoms(
                    "atomic axis needs at least one atom".into(),
                ));
            }
            for pair in atoms.windows(2) {
                if pair[1].location <= pair[0].location {
                    return Err(GridError::BadAtoms(format!(
                        "locations must be strictly increasing ({} then {})",
                        pair[0].location, pair[1].location
                    )));
                }
            }
            if let Some(a) = atoms.iter().find(|a| a.weight <= 0.0) {
                return Err(GridError::BadAtoms(format!(
                    "atom weight must be positive, got {}",
                    a.weight
                )));
            }
            Ok(AxisNodes {
                positions: atoms.iter().map(|a| a.location).collect(),
                weights: atoms.iter().map(|a| a.weight).collect(),
                is_atom: vec![true; atoms.len()],
            })
        }
    }
}

static GRID_ID: AtomicU64 = AtomicU64::new(0);

/// The discretized spectrum: flattened multi-index nodes Ω = (ω, o₁, …, o_N)
/// with product-measure quadrature weights.
///
/// Nodes are ordered lexicographically in (ω, o₁, …, o_N); grids are
/// immutable after construction and shared behind [`Arc`].
#[derive(Debug)]
pub struct SpectralGrid {
    id: u64,
    axes: Vec<AxisNodes>,
    dim: usize,
    /// Flattened coordinates, `dim` entries per node.
    coords: Vec<f64>,
    weights: Vec<f64>,
    /// Energy coordinate per node (coordinate 0, cached for phase loops).
    energies: Vec<f64>,
    /// True where the node's energy coordinate is the attached atom.
    energy_is_atom: Vec<bool>,
}

impl SpectralGrid {
    /// Cartesian product of the axes with product weights.
    ///
    /// Axis 0 must be continuous (optionally with one attached atom); atoms
    /// may not be attached to other continuous axes.
    pub fn product(specs: &[AxisSpec], rules: &QuadratureRegistry) -> Result<Arc<Self>, GridError> {
        if specs.is_empty() {
            return Err(GridError::EmptyAxes);
        }
        if !specs[0].is_continuous() {
            return Err(GridError::EnergyAxisKind);
        }
        for (k, spec) in specs.iter().enumerate().skip(1) {
            if let AxisSpec::Continuous { atom: Some(_), .. } = spec {
                return Err(GridError::AtomOffEnergyAxis { axis: k });
            }
        }

        let axes: Vec<AxisNodes> = specs
            .iter()
            .map(|s| build_axis(s, rules))
            .collect::<Result<_, _>>()?;
        let dim = axes.len();
        let count: usize = axes.iter().map(AxisNodes::len).product();

        let mut coords = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        let mut energies = Vec::with_capacity(count);
        let mut energy_is_atom = Vec::with_capacity(count);
        let mut index = vec![0usize; dim];
        for _ in 0..count {
            let mut w = 1.0;
            for (k, &i) in index.iter().enumerate() {
                coords.push(axes[k].positions[i]);
                w *= axes[k].weights[i];
            }
            weights.push(w);
            energies.push(axes[0].positions[index[0]]);
            energy_is_atom.push(axes[0].is_atom[index[0]]);
            // Row-major increment: last axis fastest, so nodes come out in
            // lexicographic (ω, o₁, …) order.
            for k in (0..dim).rev() {
                index[k] += 1;
                if index[k] < axes[k].len() {
                    break;
                }
                index[k] = 0;
            }
        }

        Ok(Arc::new(Self {
            id: GRID_ID.fetch_add(1, Ordering::Relaxed),
            axes,
            dim,
            coords,
            weights,
            energies,
            energy_is_atom,
        }))
    }

    /// Grid over a single axis.
    pub fn single_axis(spec: AxisSpec, rules: &QuadratureRegistry) -> Result<Arc<Self>, GridError> {
        Self::product(&[spec], rules)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// Number of multi-index nodes.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Number of axes (N+1).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[AxisNodes] {
        &self.axes
    }

    /// Coordinates of node `i`.
    pub fn node(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Quadrature weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Energy coordinate ω of node `i`.
    pub fn energy(&self, i: usize) -> f64 {
        self.energies[i]
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Whether node `i` sits on the energy axis atom.
    pub fn energy_is_atom(&self, i: usize) -> bool {
        self.energy_is_atom[i]
    }

    /// μ(Λ) of the truncated spectrum.
    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// ∑ᵢ wᵢ f(Ωᵢ).
    pub fn integrate(&self, f: &SampledFunction) -> Result<Complex64, GridError> {
        self.check_owns(f)?;
        Ok(self
            .weights
            .iter()
            .zip(f.values.iter())
            .map(|(&w, v)| w * v)
            .sum())
    }

    /// sup over nodes of (1+x²)ⁿ·|Dᵐf(x)| with finite-difference derivatives.
    ///
    /// Defined on single-axis grids; derivatives are taken over the
    /// continuous nodes (an attached atom is an isolated point of the
    /// measure and takes no part in the derivative estimate).
    pub fn seminorm_estimate(
        &self,
        f: &SampledFunction,
        n: usize,
        m: usize,
    ) -> Result<f64, GridError> {
        self.check_owns(f)?;
        if self.dim != 1 {
            return Err(GridError::NotOneDimensional { dim: self.dim });
        }
        let (xs, vals) = self.continuous_energy_samples(f.values.as_slice());
        seminorm::seminorm(&xs, &vals, n, m)
    }

    /// (1+x²)ⁿ·|Dᵐf| profile over the continuous energy nodes, for
    /// boundary-growth diagnostics. Positions are returned alongside.
    pub(crate) fn seminorm_profile(
        &self,
        positions: &[f64],
        values: &[Complex64],
        n: usize,
        m: usize,
    ) -> Result<Vec<f64>, GridError> {
        seminorm::weighted_profile(positions, values, n, m)
    }

    /// Continuous energy-axis positions with the matching samples pulled out
    /// of a full-length value slice (single-axis grids).
    pub(crate) fn continuous_energy_samples(
        &self,
        values: &[Complex64],
    ) -> (Vec<f64>, Vec<Complex64>) {
        let axis = &self.axes[0];
        let stride: usize = self.axes[1..]
            .iter()
            .map(AxisNodes::len)
            .product::<usize>()
            .max(1);
        debug_assert_eq!(stride, 1, "slice extraction is for single-axis grids");
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (i, (&p, &atom)) in axis.positions.iter().zip(&axis.is_atom).enumerate() {
            if !atom {
                xs.push(p);
                vs.push(values[i]);
            }
        }
        (xs, vs)
    }

    /// Positions of the continuous energy nodes.
    pub fn continuous_energy_positions(&self) -> Vec<f64> {
        self.axes[0]
            .positions
            .iter()
            .zip(&self.axes[0].is_atom)
            .filter(|(_, &a)| !a)
            .map(|(&p, _)| p)
            .collect()
    }

    /// Node-index slices sweeping the continuous energy axis, one per fixed
    /// combination of the remaining coordinates.
    pub fn energy_slices(&self) -> Vec<Vec<usize>> {
        let stride: usize = self.axes[1..]
            .iter()
            .map(AxisNodes::len)
            .product::<usize>()
            .max(1);
        let cont_i0: Vec<usize> = self.axes[0]
            .is_atom
            .iter()
            .enumerate()
            .filter(|(_, &a)| !a)
            .map(|(i, _)| i)
            .collect();
        (0..stride)
            .map(|r| cont_i0.iter().map(|&i0| i0 * stride + r).collect())
            .collect()
    }

    /// Largest gap between consecutive continuous energy nodes. Governs the
    /// resolvable band of oscillatory sums.
    pub fn max_continuous_energy_spacing(&self) -> f64 {
        let xs = self.continuous_energy_positions();
        xs.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max)
    }

    fn check_owns(&self, f: &SampledFunction) -> Result<(), GridError> {
        if f.grid.id != self.id {
            return Err(GridError::GridMismatch);
        }
        Ok(())
    }
}

/// A complex-valued function sampled on every node of a grid.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Arc<SpectralGrid>,
    values: DVector<Complex64>,
}

impl SampledFunction {
    /// Sample `f` at every node.
    pub fn from_fn(grid: &Arc<SpectralGrid>, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = DVector::from_iterator(grid.len(), (0..grid.len()).map(|i| f(grid.node(i))));
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    /// Real-valued sampling helper.
    pub fn from_real_fn(grid: &Arc<SpectralGrid>, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn from_values(
        grid: &Arc<SpectralGrid>,
        values: Vec<Complex64>,
    ) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid: Arc::clone(grid),
            values: DVector::from_vec(values),
        })
    }

    pub fn constant(grid: &Arc<SpectralGrid>, c: Complex64) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: DVector::from_element(grid.len(), c),
        }
    }

    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn values(&self) -> &DVector<Complex64> {
        &self.values
    }

    /// Largest deviation from the real axis.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise map into a new sampled function on the same grid.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.map(f),
        }
    }

    pub(crate) fn from_vector(grid: Arc<SpectralGrid>, values: DVector<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> QuadratureRegistry {
        QuadratureRegistry::builtin()
    }

    #[test]
    fn atomic_axis_passes_atoms_through() {
        let axis = build_axis(&AxisSpec::atomic(vec![Atom::new(0.5, 1.0)]), &rules()).unwrap();
        assert_eq!(axis.positions, vec![0.5]);
        assert_eq!(axis.weights, vec![1.0]);
        assert_eq!(axis.is_atom, vec![true]);
    }

    #[test]
    fn trapezoid_axis_matches_rule_definition() {
        let spec = AxisSpec::Continuous {
            lower: 0.0,
            upper: 1.0,
            nodes: 2,
            rule: "trapezoid".into(),
            atom: None,
        };
        let axis = build_axis(&spec, &rules()).unwrap();
        assert_eq!(axis.positions, vec![0.0, 1.0]);
        assert_eq!(axis.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn gauss_axis_weights_sum_to_length() {
        let axis = build_axis(&AxisSpec::continuous(0.0, 10.0, 64), &rules()).unwrap();
        let total: f64 = axis.weights.iter().sum();
        assert!((total - 10.0).abs() < 1e-12);
    }

    #[test]
    fn attached_atom_is_merged_in_order() {
        let spec = AxisSpec::continuous(1.0, 10.0, 16).with_atom(Atom::new(0.5, 2.0));
        let axis = build_axis(&spec, &rules()).unwrap();
        assert_eq!(axis.len(), 17);
        assert_eq!(axis.positions[0], 0.5);
        assert!(axis.is_atom[0]);
        assert!(axis.positions.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn single_axis_product_matches_build_axis() {
        let spec = AxisSpec::continuous(0.0, 10.0, 32);
        let axis = build_axis(&spec, &rules()).unwrap();
        let grid = SpectralGrid::single_axis(spec, &rules()).unwrap();
        assert_eq!(grid.len(), axis.len());
        for i in 0..grid.len() {
            assert_eq!(grid.node(i)[0], axis.positions[i]);
            assert_eq!(grid.weight(i), axis.weights[i]);
        }
    }

    #[test]
    fn product_weights_are_per_axis_products() {
        let grid = SpectralGrid::product(
            &[
                AxisSpec::continuous(0.0, 5.0, 4),
                AxisSpec::atomic(vec![Atom::new(-1.0, 1.0), Atom::new(1.0, 1.0)]),
            ],
            &rules(),
        )
        .unwrap();
        assert_eq!(grid.len(), 8);
        let axis0 = build_axis(&AxisSpec::continuous(0.0, 5.0, 4), &rules()).unwrap();
        for i0 in 0..4 {
            for i1 in 0..2 {
                let i = i0 * 2 + i1;
                assert_eq!(grid.node(i)[0], axis0.positions[i0]);
                assert_eq!(grid.weight(i), axis0.weights[i0] * 1.0);
            }
        }
        // ∫ 1 dμ over [0,5] × two unit atoms = 10.
        let one = SampledFunction::constant(&grid, Complex64::new(1.0, 0.0));
        let total = grid.integrate(&one).unwrap();
        assert!((total.re - 10.0).abs() < 1e-12 && total.im == 0.0);
    }

    #[test]
    fn integrate_exponential_reaches_closed_form() {
        let grid =
            SpectralGrid::single_axis(AxisSpec::continuous(0.0, 20.0, 128), &rules()).unwrap();
        let f = SampledFunction::from_real_fn(&grid, |x| (-x[0]).exp());
        let value = grid.integrate(&f).unwrap();
        // ∫₀^∞ e^{−ω} dω = 1, truncation tail e^{−20} ≈ 2e−9.
        assert!((value.re - 1.0).abs() < 1e-8, "got {}", value.re);
    }

    #[test]
    fn integrate_constant_one_is_exact() {
        let grid = SpectralGrid::single_axis(AxisSpec::continuous(0.0, 1.0, 16), &rules()).unwrap();
        let one = SampledFunction::constant(&grid, Complex64::new(1.0, 0.0));
        assert!((grid.integrate(&one).unwrap().re - 1.0).abs() < 1e-12);
        let zero = SampledFunction::zeros(&grid);
        assert_eq!(grid.integrate(&zero).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn integrate_rejects_foreign_function() {
        let g1 = SpectralGrid::single_axis(AxisSpec::continuous(0.0, 1.0, 8), &rules()).unwrap();
        let g2 = SpectralGrid::single_axis(AxisSpec::continuous(0.0, 1.0, 8), &rules()).unwrap();
        let f = SampledFunction::zeros(&g2);
        assert!(matches!(g1.integrate(&f), Err(GridError::GridMismatch)));
    }

    #[test]
    fn seminorm_of_constant() {
        let grid =
            SpectralGrid::single_axis(AxisSpec::continuous(0.0, 10.0, 64), &rules()).unwrap();
        let one = SampledFunction::constant(&grid, Complex64::new(1.0, 0.0));
        assert_eq!(grid.seminorm_estimate(&one, 0, 0).unwrap(), 1.0);
        assert!(grid.seminorm_estimate(&one, 0, 1).unwrap() <= 1e-10);
    }

    #[test]
    fn seminorm_matches_dense_scan_for_gaussian() {
        let grid =
            SpectralGrid::single_axis(AxisSpec::continuous(0.0, 10.0, 201), &rules()).unwrap();
        let f = SampledFunction::from_real_fn(&grid, |x| (-x[0] * x[0]).exp());
        let got = grid.seminorm_estimate(&f, 1, 0).unwrap();
        // Dense scan of (1+x²)e^{−x²}: strictly decreasing on [0,∞), sup = 1
        // at the origin.
        let oracle = (0..100_000)
            .map(|k| {
                let x = 10.0 * k as f64 / 99_999.0;
                (1.0 + x * x) * (-x * x).exp()
            })
            .fold(0.0, f64::max);
        assert!((oracle - 1.0).abs() < 1e-12, "dense scan sup {oracle}");
        assert!(got <= oracle + 1e-12);
        assert!(
            (got - oracle).abs() < 1e-3,
            "grid sup {got} vs dense {oracle}"
        );
    }

    #[test]
    fn energy_axis_must_be_continuous() {
        let err = SpectralGrid::product(&[AxisSpec::atomic(vec![Atom::new(1.0, 1.0)])], &rules())
            .unwrap_err();
        assert!(matches!(err, GridError::EnergyAxisKind));
    }

    #[test]
    fn atom_off_energy_axis_rejected() {
        let err = SpectralGrid::product(
            &[
                AxisSpec::continuous(0.0, 1.0, 4),
                AxisSpec::continuous(0.0, 1.0, 4).with_atom(Atom::new(0.5, 1.0)),
            ],
            &rules(),
        )
        .unwrap_err();
        assert!(matches!(err, GridError::AtomOffEnergyAxis { axis: 1 }));
    }

    #[test]
    fn negative_energies_rejected() {
        assert!(matches!(
            SpectralGrid::single_axis(AxisSpec::continuous(-1.0, 1.0, 4), &rules()),
            Err(GridError::NegativeEnergy { .. })
        ));
        assert!(matches!(
            SpectralGrid::single_axis(
                AxisSpec::continuous(0.0, 1.0, 4).with_atom(Atom::new(-0.5, 1.0)),
                &rules()
            ),
            Err(GridError::NegativeEnergy { .. })
        ));
    }

    #[test]
    fn energy_slices_sweep_the_continuum() {
        let grid = SpectralGrid::product(
            &[
                AxisSpec::continuous(1.0, 2.0, 3).with_atom(Atom::new(0.5, 1.0)),
                AxisSpec::atomic(vec![Atom::new(-1.0, 1.0), Atom::new(1.0, 1.0)]),
            ],
            &rules(),
        )
        .unwrap();
        let slices = grid.energy_slices();
        assert_eq!(slices.len(), 2);
        for (r, slice) in slices.iter().enumerate() {
            assert_eq!(slice.len(), 3);
            for &i in slice {
                assert!(!grid.energy_is_atom(i));
                assert_eq!(grid.node(i)[1], [-1.0, 1.0][r]);
            }
        }
    }

    #[test]
    fn nodes_come_out_lexicographic() {
        let grid = SpectralGrid::product(
            &[
                AxisSpec::continuous(0.0, 1.0, 3),
                AxisSpec::atomic(vec![Atom::new(0.0, 1.0), Atom::new(2.0, 0.5)]),
            ],
            &rules(),
        )
        .unwrap();
        for i in 1..grid.len() {
            let prev = grid.node(i - 1);
            let cur = grid.node(i);
            assert!(prev < cur, "nodes {prev:?} !< {cur:?}");
        }
    }
}
