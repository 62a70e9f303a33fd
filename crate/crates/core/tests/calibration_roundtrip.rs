//! Round-trip validation of the calibration fitters against known
//! ground truth, at paper-scale statistics and in degenerate regimes.

mod common;

use common::{multinomial_scan, paper_model, paper_source, tally_fixed_window};
use noon_core::{
    estimate_xi, fit_model, fit_visibility, CalibrationCurves, InterferometerModel, Phase,
    SourceConfig, TransmissionProfile,
};
use std::f64::consts::{FRAC_PI_2, PI};

#[test]
fn visibility_round_trip_at_paper_scale() {
    // 100 phases x 250k events of multinomial noise
    let scan = multinomial_scan(&paper_model(), 100, 250_000, 7101);
    let fit = fit_visibility(&scan).unwrap();
    assert!(
        (fit.visibility - 0.989).abs() < 0.003,
        "visibility {} +- {}",
        fit.visibility,
        fit.std_err
    );
    assert!((fit.visibility - 0.989).abs() < 4.0 * fit.std_err);
    assert!(fit.offset_ok);
}

#[test]
fn model_fit_round_trip_with_multinomial_noise() {
    let scan = multinomial_scan(&paper_model(), 100, 250_000, 314);
    let curves = fit_model(&scan).unwrap();
    assert!((curves.model.visibility() - 0.989).abs() < 0.002);
    // interior (well-conditioned) phases recover the constant transmissions
    for row in scan.rows() {
        let c = (2.0 * row.phi.radians()).cos();
        if c > 0.5 {
            assert!(
                (curves.model.eta_t().at(row.phi) - 0.8026).abs() < 0.005,
                "eta_t off at phi = {}",
                row.phi.radians()
            );
            assert!((curves.model.eta_r().at(row.phi) - 0.7941).abs() < 0.005);
        }
    }
    assert!(curves.fit.converged);
}

#[test]
fn parameter_errors_shrink_with_counting_statistics() {
    // errors should scale like 1/sqrt(events) within a factor of two
    let small = fit_model(&multinomial_scan(&paper_model(), 48, 10_000, 99)).unwrap();
    let large = fit_model(&multinomial_scan(&paper_model(), 48, 1_000_000, 100)).unwrap();
    let ratio_v = small.visibility_err / large.visibility_err;
    assert!(
        ratio_v > 5.0 && ratio_v < 20.0,
        "visibility error ratio {ratio_v} not ~10"
    );
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let ratio_eta = mean(&small.eta_t_err) / mean(&large.eta_t_err);
    assert!(
        ratio_eta > 5.0 && ratio_eta < 20.0,
        "transmission error ratio {ratio_eta} not ~10"
    );
}

#[test]
fn transmission_uncertainty_widens_near_the_coincidence_minimum() {
    let scan = multinomial_scan(&paper_model(), 100, 250_000, 2718);
    let curves = fit_model(&scan).unwrap();
    let err_at = |target: f64| -> f64 {
        curves.eta_t_err_at(Phase::new(target).unwrap())
    };
    // conditioning collapses near phi = pi/2 + m pi
    assert!(
        err_at(FRAC_PI_2) > 3.0 * err_at(0.05),
        "expected widened uncertainty near pi/2: {} vs {}",
        err_at(FRAC_PI_2),
        err_at(0.05)
    );
}

#[test]
fn sinusoidal_transmission_modulation_is_recovered() {
    // 1% peak-to-peak (amplitude 0.5%) wave-plate-angle dependence
    let grid: Vec<f64> = (0..100).map(|i| i as f64 / 100.0 * 2.0 * PI).collect();
    let et: Vec<f64> = grid.iter().map(|p| 0.8026 * (1.0 + 0.005 * p.sin())).collect();
    let truth = InterferometerModel::new(
        0.989,
        TransmissionProfile::tabulated(grid.clone(), et).unwrap(),
        TransmissionProfile::constant(0.7941).unwrap(),
        0.0,
        0.0,
    )
    .unwrap();
    let scan = multinomial_scan(&truth, 100, 2_000_000, 5591);
    let curves = fit_model(&scan).unwrap();
    let variation = curves.fit.max_transmission_variation;
    assert!(
        variation > 0.007 && variation < 0.015,
        "reported variation {variation} not ~1%"
    );
    // the fitted profile should actually track the modulation at the
    // well-conditioned phases
    for (i, &phi) in grid.iter().enumerate() {
        let c = (2.0 * phi).cos();
        if c > 0.5 {
            let fitted = curves.model.eta_t().at(Phase::new(phi).unwrap());
            let expected = 0.8026 * (1.0 + 0.005 * phi.sin());
            assert!(
                (fitted - expected).abs() < 0.004,
                "row {i}: fitted {fitted} vs true {expected}"
            );
        }
    }
}

#[test]
fn xi_round_trip_from_a_billion_pulse_window() {
    // fixed acquisition window at the coincidence minimum, where double
    // pairs dominate the coincidence floor
    let cfg = paper_source(61_803);
    let phi = Phase::new(FRAC_PI_2).unwrap();
    let counts = tally_fixed_window(&cfg, phi, 1_000_000_000, 8, 0);
    let curves = CalibrationCurves::exact(paper_model());
    let est = estimate_xi(&counts, &curves, phi).unwrap();
    assert!(
        (est.xi - 0.00155).abs() < 0.1 * 0.00155,
        "xi {} +- {} vs 0.00155",
        est.xi,
        est.std_err
    );
    assert!((est.xi - 0.00155).abs() < 3.0 * est.std_err);
    assert!((est.pair_prob - 0.0046).abs() < 0.0001);
    assert!(!est.clamped);
}

#[test]
fn xi_consistent_with_zero_for_a_single_pair_source() {
    let model = InterferometerModel::with_constant_eta(0.989, 0.8026, 0.7941, 0.0, 0.0).unwrap();
    let cfg = SourceConfig::new(model.clone(), 0.0046, 40_404).unwrap();
    let phi = Phase::new(FRAC_PI_2).unwrap();
    let counts = tally_fixed_window(&cfg, phi, 400_000_000, 8, 0);
    let curves = CalibrationCurves::exact(model);
    let est = estimate_xi(&counts, &curves, phi).unwrap();
    assert!(
        est.xi <= 2.0 * est.std_err,
        "xi {} should be consistent with zero (sigma {})",
        est.xi,
        est.std_err
    );
}

#[test]
fn fitted_curves_survive_json_round_trip() {
    let scan = multinomial_scan(&paper_model(), 32, 100_000, 11);
    let curves = fit_model(&scan).unwrap();
    let text = curves.to_json_string().unwrap();
    let back = CalibrationCurves::read_json(text.as_bytes()).unwrap();
    assert_eq!(back, curves);
}
