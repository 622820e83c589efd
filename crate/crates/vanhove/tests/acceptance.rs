//! Acceptance suite: one criterion per numbered check, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion report.

use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vanhove::algebra::VanHoveElement;
use vanhove::evolution::{
    asymptotic_expectation, evolve_observable, evolve_state, offdiagonal_expectation,
    resolvable_band, DEFAULT_BAND_CONSTANT,
};
use vanhove::grid::{AxisSpec, QuadratureRegistry, SampledFunction, SpectralGrid};
use vanhove::pointer::{
    build_pointer_space, pointer_basis, pointer_representation, verify_gns_identity,
    DEFAULT_NULL_TOL,
};
use vanhove::scenario::{
    builtin_scenario, emit_outputs, run_scenario, RunOptions, Scenario, ScenarioConfig,
    BUILTIN_SCENARIOS,
};

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
    VanHoveElement::new(
        SampledFunction::from_values(grid, diag.iter().cloned().collect()).unwrap(),
        reg,
    )
    .unwrap()
}

fn max_dev(a: &VanHoveElement, b: &VanHoveElement) -> f64 {
    let diag = (a.diag() - b.diag())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let reg = (a.reg() - b.reg())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    diag.max(reg)
}

fn scale_of(a: &VanHoveElement) -> f64 {
    let diag = a.diag().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let reg = a.reg().iter().map(|z| z.norm()).fold(0.0, f64::max);
    diag.max(reg).max(1.0)
}

fn gaussian_unit_config() -> ScenarioConfig {
    ScenarioConfig::from_toml_str(builtin_scenario("gaussian_unit").unwrap().toml).unwrap()
}

// 1. Algebra laws on 100 seeded random elements (n = 64): associativity,
// involution, distributivity, residuals ≤ 1e-12 relative; under 10 s.
fn criterion_1() -> Result<(), String> {
    let start = Instant::now();
    let grid = test_grid(64);
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let elements: Vec<VanHoveElement> = (0..100).map(|_| random_element(&grid, &mut rng)).collect();

    for window in elements.windows(3) {
        let (a, b, c) = (&window[0], &window[1], &window[2]);

        let assoc_l = a.multiply(b).unwrap().multiply(c).unwrap();
        let assoc_r = a.multiply(&b.multiply(c).unwrap()).unwrap();
        let res = max_dev(&assoc_l, &assoc_r) / scale_of(&assoc_l);
        if res > 1e-12 {
            return Err(format!("associativity residual {res:e}"));
        }

        let invol = max_dev(&a.star().star(), a);
        if invol > 0.0 {
            return Err(format!("a** deviated by {invol:e}"));
        }
        let anti_l = a.multiply(b).unwrap().star();
        let anti_r = b.star().multiply(&a.star()).unwrap();
        let res = max_dev(&anti_l, &anti_r) / scale_of(&anti_l);
        if res > 1e-12 {
            return Err(format!("(ab)* residual {res:e}"));
        }

        let dist_l = a.multiply(&b.add(c).unwrap()).unwrap();
        let dist_r = a.multiply(b).unwrap().add(&a.multiply(c).unwrap()).unwrap();
        let res = max_dev(&dist_l, &dist_r) / scale_of(&dist_l);
        if res > 1e-12 {
            return Err(format!("distributivity residual {res:e}"));
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 10.0 {
        return Err(format!("runtime {elapsed:.1}s exceeds 10s"));
    }
    Ok(())
}

// 2. Automorphism laws: multiplicativity, *-preservation, group law at
// 1e-12; the diagonal subalgebra pointwise fixed exactly.
fn criterion_2() -> Result<(), String> {
    let grid = test_grid(48);
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    for _ in 0..10 {
        let a = random_element(&grid, &mut rng);
        let b = random_element(&grid, &mut rng);
        let (s, t) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));

        let lhs = evolve_observable(&a.multiply(&b).unwrap(), t);
        let rhs = evolve_observable(&a, t)
            .multiply(&evolve_observable(&b, t))
            .unwrap();
        let res = max_dev(&lhs, &rhs) / scale_of(&lhs);
        if res > 1e-12 {
            return Err(format!("U_t(ab) residual {res:e}"));
        }

        let lhs = evolve_observable(&a.star(), t);
        let rhs = evolve_observable(&a, t).star();
        if max_dev(&lhs, &rhs) > 1e-12 {
            return Err("U_t(a*) deviates from U_t(a)*".to_string());
        }

        let lhs = evolve_observable(&evolve_observable(&a, s), t);
        let rhs = evolve_observable(&a, s + t);
        if max_dev(&lhs, &rhs) > 1e-12 {
            return Err("group law U_s∘U_t ≠ U_{s+t}".to_string());
        }

        let id0 = evolve_observable(&a, 0.0);
        if max_dev(&id0, &a) > 0.0 {
            return Err("U_0 is not the identity".to_string());
        }
    }

    let f = SampledFunction::from_real_fn(&grid, |x| (-0.3 * (x[0] - 4.0).powi(2)).exp());
    let diag = VanHoveElement::diagonal(&f);
    for t in [0.5, 2.0, 5.5] {
        if max_dev(&evolve_observable(&diag, t), &diag) > 0.0 {
            return Err("diagonal subalgebra moved under evolution".to_string());
        }
    }
    Ok(())
}

// 3. Conservation: trace exact, energy constant to 1e-12 over [0, band].
fn criterion_3() -> Result<(), String> {
    let config = gaussian_unit_config();
    let scenario = Scenario::prepare(&config).unwrap();
    let rho = &scenario.state;
    let h = VanHoveElement::hamiltonian(&scenario.grid);
    let e0 = rho.expectation(&h).unwrap();
    let band = resolvable_band(&scenario.grid, DEFAULT_BAND_CONSTANT);
    for k in 0..=20 {
        let t = band * k as f64 / 20.0;
        let rho_t = evolve_state(rho, t);
        if rho_t.trace() != rho.trace() {
            return Err(format!("trace moved at t={t}"));
        }
        let e = rho_t.expectation(&h).unwrap();
        if (e - e0).norm() > 1e-12 {
            return Err(format!("energy moved by {:e} at t={t}", (e - e0).norm()));
        }
    }
    Ok(())
}

// 4. Riemann–Lebesgue decay in gaussian_unit: static value π/4 within
// 1e-8, |value(12)|/|value(0)| ≤ 1e-6, under 30 s.
fn criterion_4() -> Result<(), String> {
    let start = Instant::now();
    let config = gaussian_unit_config();
    let run = run_scenario(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
    let reference = run.summary.decay_reference;
    if (reference - std::f64::consts::FRAC_PI_4).abs() > 1e-8 {
        return Err(format!("static value {reference} is not π/4 within 1e-8"));
    }
    if run.summary.final_abs_over_ref > 1e-6 {
        return Err(format!(
            "final ratio {:e} exceeds 1e-6",
            run.summary.final_abs_over_ref
        ));
    }
    if !run.summary.failures.is_empty() {
        return Err(format!("run reported failures: {:?}", run.summary.failures));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 30.0 {
        return Err(format!("runtime {elapsed:.1}s exceeds 30s"));
    }
    Ok(())
}

// 5. Counterexample boundary: the atom_pair off-diagonal magnitude never
// deviates from its reference by more than 1e-12.
fn criterion_5() -> Result<(), String> {
    let config =
        ScenarioConfig::from_toml_str(builtin_scenario("atom_pair").unwrap().toml).unwrap();
    let scenario = Scenario::prepare(&config).unwrap();
    let curve = vanhove::evolution::decay_curve(
        &scenario.state,
        &scenario.observable,
        &scenario.times,
        &scenario.band,
        scenario.tail_bound,
    )
    .unwrap();
    let reference = curve.reference();
    if reference <= 0.0 {
        return Err("atom term vanished".to_string());
    }
    for (&t, &m) in curve.times().iter().zip(curve.magnitudes()) {
        if (m - reference).abs() > 1e-12 {
            return Err(format!(
                "|value({t})| deviated by {:e}",
                (m - reference).abs()
            ));
        }
    }
    let run = run_scenario(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
    if !run.summary.failures.is_empty() {
        return Err(format!("run reported failures: {:?}", run.summary.failures));
    }
    Ok(())
}

// 6. Oracle equivalence: the accelerated anti-diagonal path agrees with
// the direct double sum within 1e-10 on every built-in scenario.
fn criterion_6() -> Result<(), String> {
    for builtin in BUILTIN_SCENARIOS {
        let config = ScenarioConfig::from_toml_str(builtin.toml).unwrap();
        let run = run_scenario(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
        if run.summary.path_agreement_residual > 1e-10 {
            return Err(format!(
                "{}: paths diverge by {:e}",
                builtin.name, run.summary.path_agreement_residual
            ));
        }
    }
    Ok(())
}

// 7. GNS/pointer suite: cyclic identity on 100 random diagonal
// observables ≤ 1e-12; the pointer basis diagonalizes the CSCO with
// off-diagonal entries exactly zero; spectral resolution ≤ 1e-12.
fn criterion_7() -> Result<(), String> {
    let config =
        ScenarioConfig::from_toml_str(builtin_scenario("multi_index").unwrap().toml).unwrap();
    let scenario = Scenario::prepare(&config).unwrap();
    let rho = &scenario.state;
    let grid = &scenario.grid;
    let space = build_pointer_space(rho, DEFAULT_NULL_TOL).map_err(|e| e.to_string())?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
    for _ in 0..100 {
        let values: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
            .collect();
        let a = VanHoveElement::diagonal(&SampledFunction::from_values(grid, values).unwrap());
        let residual = verify_gns_identity(&a, rho, &space).map_err(|e| e.to_string())?;
        if residual > 1e-12 {
            return Err(format!("cyclic identity residual {residual:e}"));
        }
    }

    // The pointer CSCO {π(H), π(O₁)}: multiplication operators materialized
    // on the basis must be exactly diagonal.
    let h = VanHoveElement::hamiltonian(grid);
    let o1 = VanHoveElement::diagonal(&SampledFunction::from_real_fn(grid, |x| x[1]));
    for op in [&h, &o1] {
        let matrix = pointer_representation(op, &space)
            .map_err(|e| e.to_string())?
            .to_matrix();
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                if i != j && matrix[(i, j)] != Complex64::new(0.0, 0.0) {
                    return Err(format!("off-diagonal entry at ({i},{j})"));
                }
            }
        }
    }

    // Spectral resolution: ∑_Θ σ(Θ) conj(â(Θ)) b̂(Θ) = (â, b̂).
    let basis = pointer_basis(&space).map_err(|e| e.to_string())?;
    let a = VanHoveElement::diagonal(&SampledFunction::from_real_fn(grid, |x| {
        (-0.2 * (x[0] - 3.0).powi(2)).exp() * (1.0 + 0.5 * x[1])
    }));
    let b = VanHoveElement::diagonal(&SampledFunction::from_real_fn(grid, |x| {
        (-0.1 * (x[0] - 6.0).powi(2)).exp() - 0.3 * x[1]
    }));
    let direct = vanhove::pointer::gns_inner_product(&a, &b, rho).map_err(|e| e.to_string())?;
    let resummed: Complex64 = (0..basis.len())
        .map(|k| {
            let i = basis.node_index(k);
            basis.sigma()[k] * a.diag()[i].conj() * b.diag()[i]
        })
        .sum();
    let residual = (direct - resummed).norm() / direct.norm().max(1.0);
    if residual > 1e-12 {
        return Err(format!("spectral resolution residual {residual:e}"));
    }
    Ok(())
}

// 8. w*-limit composition: |ρ_t(a) − ρ̂(â)| ≤ 1e-6 · reference at t = 12
// in gaussian_unit, with ρ̂(â) exactly the asymptotic expectation.
fn criterion_8() -> Result<(), String> {
    let config = gaussian_unit_config();
    let scenario = Scenario::prepare(&config).unwrap();
    let rho = &scenario.state;
    let a = &scenario.observable;

    let limit = asymptotic_expectation(rho, a).map_err(|e| e.to_string())?;
    if limit != rho.diag_pairing(a).re {
        return Err("asymptotic_expectation deviates from the diagonal pairing".to_string());
    }
    let reference = offdiagonal_expectation(rho, a, 0.0)
        .map_err(|e| e.to_string())?
        .norm();
    let rho_12 = evolve_state(rho, 12.0);
    let at_12 = rho_12.expectation(a).map_err(|e| e.to_string())?;
    let gap = (at_12.re - limit).abs().max(at_12.im.abs());
    if gap > 1e-6 * reference {
        return Err(format!("w*-limit gap {gap:e} exceeds 1e-6·reference"));
    }
    Ok(())
}

// 9. Refinement: doubling the grid moves every trusted quantity by less
// than the configured tolerance on every built-in scenario.
fn criterion_9() -> Result<(), String> {
    for builtin in BUILTIN_SCENARIOS {
        let config = ScenarioConfig::from_toml_str(builtin.toml).unwrap();
        let run = run_scenario(
            &config,
            &RunOptions {
                seed: None,
                refine: true,
            },
        )
        .map_err(|e| e.to_string())?;
        let delta = run
            .summary
            .grid_refinement_delta
            .ok_or_else(|| format!("{}: refine did not run", builtin.name))?;
        if delta > config.analysis.refine_tol {
            return Err(format!(
                "{}: refinement delta {delta:e} exceeds {:e}",
                builtin.name, config.analysis.refine_tol
            ));
        }
        if !run.summary.failures.is_empty() {
            return Err(format!("{}: {:?}", builtin.name, run.summary.failures));
        }
    }
    Ok(())
}

// 10. Determinism: two runs of every built-in with a fixed seed emit
// byte-identical CSV and JSON artifacts.
fn criterion_10() -> Result<(), String> {
    for builtin in BUILTIN_SCENARIOS {
        let config = ScenarioConfig::from_toml_str(builtin.toml).unwrap();
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut payloads: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
        for pass in 0..2 {
            let run = run_scenario(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
            let dir = tmp.path().join(format!("{}_{pass}", builtin.name));
            let written = emit_outputs(&run, &dir, true).map_err(|e| e.to_string())?;
            let mut bytes = Vec::new();
            for path in written {
                let name = path.file_name().unwrap().to_string_lossy().to_string();
                bytes.push((name, std::fs::read(&path).map_err(|e| e.to_string())?));
            }
            payloads.push(bytes);
        }
        let (first, second) = (&payloads[0], &payloads[1]);
        if first.len() != second.len() {
            return Err(format!("{}: file sets differ", builtin.name));
        }
        for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(second) {
            if name_a != name_b || bytes_a != bytes_b {
                return Err(format!("{}: {name_a} differs between runs", builtin.name));
            }
        }
    }
    Ok(())
}

type Criterion = fn() -> Result<(), String>;

#[test]
fn acceptance() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 algebra laws (100 random elements, 1e-12)", criterion_1),
        (
            "2 automorphism laws (1e-12, diagonal fixed exactly)",
            criterion_2,
        ),
        ("3 conservation (trace exact, energy 1e-12)", criterion_3),
        (
            "4 Riemann-Lebesgue decay (pi/4 at 1e-8, ratio 1e-6)",
            criterion_4,
        ),
        (
            "5 counterexample boundary (atom term constant, 1e-12)",
            criterion_5,
        ),
        ("6 oracle equivalence (paths agree to 1e-10)", criterion_6),
        (
            "7 GNS/pointer suite (1e-12, exact diagonality)",
            criterion_7,
        ),
        (
            "8 w*-limit composition (1e-6 reference at t=12)",
            criterion_8,
        ),
        ("9 refinement (doubling n within tolerance)", criterion_9),
        ("10 determinism (byte-identical artifacts)", criterion_10),
    ];

    let mut failed = Vec::new();
    for (label, check) in criteria {
        match check() {
            Ok(()) => println!("PASS criterion {label}"),
            Err(reason) => {
                println!("FAIL criterion {label}: {reason}");
                failed.push(format!("{label}: {reason}"));
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
