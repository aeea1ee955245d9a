//! End-to-end behaviour of the property verifier on dimensional waves:
//! full-report passes, honest near-noise-floor annotations in the far tail,
//! tolerance of sub-floor ties on long domains, and negative controls that
//! must fail loudly.

use std::sync::OnceLock;

use solwave::{
    solve_wave, verify_all, Environment, GridSpec, PropertyId, SolveRequest, SolverTarget,
    Status, Verifier, VerifyConfig, WaveSolution,
};

fn env() -> Environment {
    // Standard gravity and a realistic ambient pressure (per unit density)
    // exercise every scaling path; the checks themselves are gauge- and
    // unit-independent.
    Environment::new(9.81, 1.0, 101.325).unwrap()
}

fn moderate_wave() -> WaveSolution {
    static WAVE: OnceLock<WaveSolution> = OnceLock::new();
    WAVE.get_or_init(|| {
        solve_wave(&SolveRequest::new(env(), SolverTarget::Amplitude(0.3)).with_modes(512))
            .unwrap()
    })
    .clone()
}

#[test]
fn dimensional_wave_report_passes_and_is_bit_reproducible() {
    let sol = moderate_wave();
    let config = VerifyConfig::default();
    let report = verify_all(&sol, &config).unwrap();

    assert_eq!(report.overall, Status::Pass, "\n{report}");

    // Exactly one finding per property, in the declared order.
    let names: Vec<&str> = report.findings.iter().map(|f| f.property.name()).collect();
    let expected: Vec<&str> = PropertyId::ALL.iter().map(|p| p.name()).collect();
    assert_eq!(names, expected);

    // Identical inputs give byte-identical reports.
    let again = verify_all(&sol, &config).unwrap();
    assert_eq!(report.to_json(), again.to_json());
    assert_eq!(report.to_string(), again.to_string());
}

/// A sampling window confined to the far tail still certifies positivity,
/// but the margin sits under 1e−7·g·d and the finding says so.
#[test]
fn positivity_is_annotated_near_the_noise_floor_in_the_far_tail() {
    // Pin the half-length so the tail of the window carries values between
    // the certification floor (1e−9·g·d) and the annotation band (1e−7·g·d).
    let sol = solve_wave(
        &SolveRequest::new(env(), SolverTarget::Amplitude(0.3))
            .with_modes(256)
            .with_half_length(25.0),
    )
    .unwrap();
    let gd = 9.81;

    let verifier = Verifier::new(&sol, VerifyConfig::default()).unwrap();
    let span = sol.half_length();
    let stations: Vec<f64> = (0..25).map(|i| 0.86 * span + 0.12 * span * i as f64 / 24.0).collect();
    let grid = verifier
        .fields()
        .sample_grid(&GridSpec::uniform(stations, 8).unwrap())
        .unwrap();

    let finding = verifier.check_positivity(&grid).unwrap();
    assert_eq!(finding.status, Status::Pass, "notes: {:?}", finding.notes);
    assert!(
        finding.margin < 1e-7 * gd && finding.margin >= 1e-9 * gd,
        "margin {:.3e} should sit between the floor and the band",
        finding.margin
    );
    assert!(
        finding.notes.iter().any(|n| n.contains("near noise floor")),
        "notes: {:?}",
        finding.notes
    );
}

/// On a long auto-doubled domain the far tail falls below the certification
/// floor; ties there are annotated, never failed, and the overall report
/// still passes.
#[test]
fn long_domain_small_amplitude_report_passes_with_tail_ties() {
    let sol = solve_wave(
        &SolveRequest::new(env(), SolverTarget::Amplitude(0.1)).with_modes(512),
    )
    .unwrap();
    assert!(
        sol.half_length() >= 80.0,
        "expected the domain to auto-double, got {}",
        sol.half_length()
    );

    let report = verify_all(&sol, &VerifyConfig::default()).unwrap();
    assert_eq!(report.overall, Status::Pass, "\n{report}");

    // With this much tail the monotonicity chains must have recorded ties
    // (annotated sub-floor differences) yet still certified the descent.
    let mono = report.finding(PropertyId::MonoBrokenLine);
    assert_eq!(mono.status, Status::Pass);
    assert!(
        mono.notes.iter().any(|n| n.contains("tie")),
        "expected tie annotations on an 80-depth domain, notes: {:?}",
        mono.notes
    );
}

/// Corrupting the solution with a relative 1e−3 odd component must flip
/// symmetry to a hard fail with a concrete witness, and the overall report
/// with it.
#[test]
fn injected_asymmetry_fails_the_report_with_a_witness() {
    let sol = moderate_wave().with_injected_asymmetry(1e-3);
    let report = verify_all(&sol, &VerifyConfig::default()).unwrap();

    assert_eq!(report.overall, Status::Fail);
    let symmetry = report.finding(PropertyId::Symmetry);
    assert_eq!(symmetry.status, Status::Fail);
    assert!(
        symmetry.witness.is_some(),
        "a failing finding must carry a witness point"
    );

    // Every other failing finding (if any) must also carry its witness.
    for finding in &report.findings {
        if finding.status == Status::Fail {
            assert!(finding.witness.is_some(), "{} fails without witness", finding.property);
        }
    }
}
