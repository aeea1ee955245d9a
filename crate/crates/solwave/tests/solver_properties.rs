//! End-to-end checks of the wave solver through the public API: agreement
//! with first-order asymptotics at small amplitude, independently probed
//! residuals, structural properties of the computed surface (evenness,
//! monotone decay at the dispersion-predicted rate), flux constancy, and
//! continuation behaviour.

use solwave::{
    continue_amplitude, kdv_profile, numeric, residuals, solve_wave, Environment,
    FieldEvaluator, GridSpec, ProbeSpec, SolveRequest, SolverError, SolverTarget,
};

fn env() -> Environment {
    Environment::new(9.81, 1.0, 0.0).unwrap()
}

fn solve(a: f64, modes: usize) -> solwave::WaveSolution {
    solve_wave(&SolveRequest::new(env(), SolverTarget::Amplitude(a)).with_modes(modes)).unwrap()
}

/// First-order theory carries an O(a²) error whose leading coefficient is
/// known from the second-order profile correction (≈ 0.22), so the
/// deviation max|η − η₁| must stay below 0.25·a² and must shrink by at
/// least 3× (ideally 4×) when the amplitude halves.
#[test]
fn small_amplitude_solutions_match_the_first_order_profile() {
    let e = env();
    let mut worst_dev = Vec::new();
    for &a in &[0.05, 0.025] {
        let sol = solve(a, 512);
        let fields = FieldEvaluator::new(&sol);
        let oracle = kdv_profile(a, &e).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let x = 20.0 * i as f64 / 200.0;
            let eta = fields.surface_elevation(x).unwrap();
            worst = worst.max((eta - oracle.surface(x)).abs());
        }
        assert!(
            worst <= 0.25 * a * a,
            "a={a}: deviation {worst:.3e} exceeds the second-order envelope {:.3e}",
            0.25 * a * a
        );
        worst_dev.push(worst);
    }
    let ratio = worst_dev[0] / worst_dev[1];
    println!(
        "first-order deviation: {:.4e} (a=0.05), {:.4e} (a=0.025); ratio {ratio:.3}, \
         normalized-by-a ratio {:.3}",
        worst_dev[0],
        worst_dev[1],
        ratio / 2.0
    );
    assert!(
        ratio >= 3.0,
        "halving the amplitude should shrink the deviation by ≥ 3×, got {ratio:.2}"
    );
}

/// Residuals recomputed on probe grids off the collocation nodes — and
/// again at doubled probe density — must stay within a small multiple of
/// the requested tolerance.
#[test]
fn independently_probed_residuals_confirm_the_solve() {
    let tol = 1e-11;
    let sol = solve_wave(
        &SolveRequest::new(env(), SolverTarget::Amplitude(0.3))
            .with_modes(1024)
            .with_tol(tol),
    )
    .unwrap();

    let probe = ProbeSpec::default();
    for report in [residuals(&sol, &probe), residuals(&sol, &probe.doubled())] {
        assert!(
            report.bernoulli_surface_residual <= 10.0 * tol,
            "surface Bernoulli residual {:.3e}",
            report.bernoulli_surface_residual
        );
        assert!(
            report.laplace_residual <= 1e-9,
            "interior harmonicity residual {:.3e}",
            report.laplace_residual
        );
        assert!(
            report.kinematic_surface_residual <= 100.0 * tol,
            "kinematic residual {:.3e}",
            report.kinematic_surface_residual
        );
        assert!(report.bed_residual <= 1e-12, "bed residual {:.3e}", report.bed_residual);
        assert!(report.decay_residual <= 1e-9, "decay residual {:.3e}", report.decay_residual);
    }
}

/// The computed surface must be even to near round-off, strictly decreasing
/// away from the crest wherever it stands clear of evaluation noise, and
/// its tail must decay at the rate tied to the wave speed by the linear
/// dispersion relation (within 2%).
#[test]
fn surface_is_even_monotone_and_decays_at_the_predicted_rate() {
    let e = env();
    for &a in &[0.2, 0.3] {
        let sol = solve(a, 256);
        let fields = FieldEvaluator::new(&sol);
        let span = sol.half_length();

        // Evenness at mirrored stations.
        let mut asym = 0.0f64;
        for i in 1..=64 {
            let x = 0.95 * span * i as f64 / 64.0;
            let plus = fields.surface_elevation(x).unwrap();
            let minus = fields.surface_elevation(-x).unwrap();
            asym = asym.max((plus - minus).abs());
        }
        assert!(asym <= 1e-12 * a, "a={a}: asymmetry {asym:.3e}");

        // Strict decrease down to the evaluation noise floor.
        let mu = numeric::decay_rate(sol.speed().powi(2), e.gravity, e.depth)
            .expect("supercritical wave has a decay rate");
        let x_floor = (a / 1e-9).ln() / mu;
        let mut prev = fields.surface_elevation(0.0).unwrap();
        for i in 1..=100 {
            let x = x_floor * i as f64 / 100.0;
            let eta = fields.surface_elevation(x).unwrap();
            assert!(
                eta < prev,
                "a={a}: surface fails to decrease strictly at x={x:.3} ({eta:.6e} vs {prev:.6e})"
            );
            prev = eta;
        }

        // Tail rate: fit log η inside the last quarter of the domain but
        // short of the pinned trough, whose enforced zero biases the slope.
        let lo = 0.75 * span;
        let hi = span - 5.0 / mu;
        assert!(hi > lo, "fit window empty; widen the domain");
        let mut xs = Vec::new();
        let mut ln_eta = Vec::new();
        for i in 0..=40 {
            let x = lo + (hi - lo) * i as f64 / 40.0;
            let eta = fields.surface_elevation(x).unwrap();
            assert!(eta > 0.0);
            xs.push(x);
            ln_eta.push(eta.ln());
        }
        let (slope, _) = numeric::linear_fit(&xs, &ln_eta);
        let fitted = -slope;
        let rel = (fitted - mu).abs() / mu;
        assert!(
            rel <= 0.02,
            "a={a}: fitted decay rate {fitted:.6} vs dispersion root {mu:.6} (rel {rel:.4})"
        );
    }
}

/// Supercriticality, flux positivity and constancy, and the moving-frame
/// velocity deficit must hold at every sampled point.
#[test]
fn flux_and_frame_velocity_invariants_hold() {
    let sol = solve(0.25, 256);
    assert!(sol.froude() > 1.0, "froude {}", sol.froude());
    let m = sol.mass_flux();
    assert!(m > 0.0, "mass flux {m}");

    let fields = FieldEvaluator::new(&sol);
    let span = sol.half_length();

    // Relative spread of the flux integral across 16 stations.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..16 {
        let x = -0.9 * span + 1.8 * span * i as f64 / 15.0;
        let flux = fields.mass_flux(x).unwrap();
        lo = lo.min(flux);
        hi = hi.max(flux);
    }
    let spread = (hi - lo) / m;
    assert!(spread <= 1e-8, "flux spread {spread:.3e}");

    // u − c < 0 everywhere, tightest under the crest.
    let grid = fields
        .sample_grid(&GridSpec::symmetric(0.9 * span, 41, 17).unwrap())
        .unwrap();
    let mut max_u_rel = f64::NEG_INFINITY;
    for sample in &grid.samples {
        max_u_rel = max_u_rel.max(sample.u_rel);
    }
    assert!(
        max_u_rel < 0.0,
        "relative horizontal velocity reaches {max_u_rel:.6e} ≥ 0"
    );
}

/// Warm-started continuation must agree with direct solves, produce a
/// strictly increasing amplitude–speed relation consistent with the
/// first-order speed at small amplitude, and refuse amplitudes above the
/// cap before doing any work.
#[test]
fn continuation_is_monotone_consistent_and_capped() {
    let e = env();
    let ladder = continue_amplitude(&e, &[0.1, 0.2, 0.3], 256, 1e-12).unwrap();
    let froudes: Vec<f64> = ladder.iter().map(|s| s.froude()).collect();
    assert!(
        froudes.windows(2).all(|w| w[1] > w[0]),
        "froude not strictly increasing: {froudes:?}"
    );
    let first_order = (1.0 + 0.1f64).sqrt();
    let rel = (froudes[0] - first_order).abs() / first_order;
    assert!(rel <= 0.02, "F(0.1) = {} vs first-order {first_order} (rel {rel:.4})", froudes[0]);

    let direct = solve(0.1, 256);
    assert!(
        (direct.froude() - froudes[0]).abs() <= 1e-12,
        "single-step continuation deviates from the direct solve: {} vs {}",
        froudes[0],
        direct.froude()
    );

    match continue_amplitude(&e, &[0.1, 0.9], 256, 1e-12) {
        Err(SolverError::AmplitudeCapExceeded { ratio, .. }) => {
            assert!((ratio - 0.9).abs() < 1e-12)
        }
        other => panic!("expected the amplitude cap to reject 0.9, got {other:?}"),
    }
}
