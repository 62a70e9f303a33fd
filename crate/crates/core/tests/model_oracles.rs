//! The analytic model checked against independent brute-force oracles:
//! operator algebra for the ideal fringe and exhaustive loss-pattern
//! enumeration for the recorded classes.

mod common;

use common::{enumerate_loss_patterns, paper_model, two_photon_amplitude_probs};
use noon_core::{
    ideal_outcome_probs, lossy_event_probs, recorded_probs, InterferometerModel, Phase,
};
use std::f64::consts::PI;

#[test]
fn ideal_fringe_matches_amplitude_calculation() {
    for i in 0..=720 {
        let phi = i as f64 / 720.0 * 2.0 * PI;
        let oracle = two_photon_amplitude_probs(phi);
        let q = ideal_outcome_probs(Phase::new(phi).unwrap(), 1.0).unwrap();
        assert!(
            (q.q11 - oracle[0]).abs() < 1e-12,
            "q11 mismatch at phi={phi}: {} vs {}",
            q.q11,
            oracle[0]
        );
        assert!((q.q20 - oracle[1]).abs() < 1e-12);
        assert!((q.q02 - oracle[2]).abs() < 1e-12);
    }
}

#[test]
fn loss_propagation_matches_pattern_enumeration() {
    let grids = [
        (1.0, 0.8, 0.8),
        (0.989, 0.8026, 0.7941),
        (0.4, 0.35, 0.95),
        (0.0, 0.6, 0.2),
        (1.0, 1.0, 0.5),
    ];
    for (v, et, er) in grids {
        for i in 0..60 {
            let phi = Phase::new(i as f64 / 60.0 * 2.0 * PI).unwrap();
            let q = ideal_outcome_probs(phi, v).unwrap();
            let oracle = enumerate_loss_patterns([q.q11, q.q20, q.q02], et, er);
            let r = lossy_event_probs(&q, et, er).unwrap();
            assert!((r.p11_pair - oracle[0]).abs() < 1e-14);
            assert!((r.p20_pair - oracle[1]).abs() < 1e-14);
            assert!((r.p02_pair - oracle[2]).abs() < 1e-14);
            assert!((r.p_none - oracle[3]).abs() < 1e-14);
            let d = 1.0 - oracle[3];
            assert!((r.p11 - oracle[0] / d).abs() < 1e-14);
        }
    }
}

#[test]
fn composed_recorded_probs_match_enumeration_at_paper_parameters() {
    let model = paper_model();
    for i in 0..200 {
        let phi = Phase::new(i as f64 / 200.0 * 2.0 * PI).unwrap();
        let q = ideal_outcome_probs(phi, 0.989).unwrap();
        let oracle = enumerate_loss_patterns([q.q11, q.q20, q.q02], 0.8026, 0.7941);
        let r = recorded_probs(&model, phi);
        assert!((r.p11_pair - oracle[0]).abs() < 1e-12);
        assert!((r.p20_pair - oracle[1]).abs() < 1e-12);
        assert!((r.p02_pair - oracle[2]).abs() < 1e-12);
        assert!((r.p_none - oracle[3]).abs() < 1e-12);
    }
}

#[test]
fn tabulated_transmissions_compose_with_the_loss_oracle() {
    let phis: Vec<f64> = (0..12).map(|i| i as f64 / 12.0 * 2.0 * PI).collect();
    let et_vals: Vec<f64> = phis.iter().map(|p| 0.8 * (1.0 + 0.004 * p.sin())).collect();
    let er_vals: Vec<f64> = phis.iter().map(|p| 0.79 * (1.0 + 0.004 * p.cos())).collect();
    let model = InterferometerModel::new(
        0.95,
        noon_core::TransmissionProfile::tabulated(phis.clone(), et_vals).unwrap(),
        noon_core::TransmissionProfile::tabulated(phis.clone(), er_vals).unwrap(),
        0.0,
        0.0,
    )
    .unwrap();
    for &phi in &phis {
        let p = Phase::new(phi).unwrap();
        let q = ideal_outcome_probs(p, 0.95).unwrap();
        let et = model.eta_t().at(p);
        let er = model.eta_r().at(p);
        let oracle = enumerate_loss_patterns([q.q11, q.q20, q.q02], et, er);
        let r = recorded_probs(&model, p);
        assert!((r.p11_pair - oracle[0]).abs() < 1e-14);
        assert!((r.p_none - oracle[3]).abs() < 1e-14);
    }
}
