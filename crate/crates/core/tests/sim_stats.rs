//! Statistical validation of the pulse simulator against the analytic
//! model and its own ground-truth bookkeeping.

mod common;

use common::{enumerate_loss_patterns, merge_counts, paper_model, paper_source};
use noon_core::{
    ideal_outcome_probs, recorded_probs, simulate_pulse, simulate_scan, simulate_trials,
    simulate_trials_with_stream, EventClass, InterferometerModel, Phase, SourceConfig,
};
use std::f64::consts::FRAC_PI_4;

/// Per-pulse class tallies over a fixed pulse count.
fn tally_pulses(cfg: &SourceConfig, phi: Phase, pulses: u64, stream: u64) -> [u64; 4] {
    let mut rng = cfg.substream(stream);
    let mut counts = [0u64; 4];
    for _ in 0..pulses {
        match simulate_pulse(cfg, phi, &mut rng) {
            Some(EventClass::Coincidence) => counts[0] += 1,
            Some(EventClass::TransmittedOnly) => counts[1] += 1,
            Some(EventClass::ReflectedOnly) => counts[2] += 1,
            None => counts[3] += 1,
        }
    }
    counts
}

fn assert_within_five_sigma(observed: &[u64; 4], expected: &[f64; 4], pulses: u64) {
    for (i, (&obs, &p)) in observed.iter().zip(expected.iter()).enumerate() {
        let mean = p * pulses as f64;
        let sigma = (pulses as f64 * p * (1.0 - p)).sqrt().max(1.0);
        assert!(
            ((obs as f64) - mean).abs() < 5.0 * sigma,
            "class {i}: observed {obs}, expected {mean:.1} +- {sigma:.1}"
        );
    }
}

#[test]
fn single_pair_frequencies_match_the_model_within_five_sigma() {
    // single-pair mode: xi = 0, dark = 0, near-deterministic emission
    let model = InterferometerModel::with_constant_eta(0.989, 0.8026, 0.7941, 0.0, 0.0).unwrap();
    let cfg = SourceConfig::new(model.clone(), 0.99, 424).unwrap();
    let pulses = 1_000_000u64;
    let phi = Phase::new(FRAC_PI_4).unwrap();
    let r = recorded_probs(&model, phi);
    let expected = [
        0.99 * r.p11_pair,
        0.99 * r.p20_pair,
        0.99 * r.p02_pair,
        0.01 + 0.99 * r.p_none,
    ];
    let observed = tally_pulses(&cfg, phi, pulses, 0);
    assert_within_five_sigma(&observed, &expected, pulses);
}

#[test]
fn double_pair_union_matches_first_principles() {
    // heavy double-pair load so the union logic dominates the check
    let model = InterferometerModel::with_constant_eta(0.95, 0.8, 0.75, 0.1, 0.0).unwrap();
    let cfg = SourceConfig::new(model.clone(), 0.2, 7001).unwrap();
    let phi = Phase::new(1.1).unwrap();
    let q = ideal_outcome_probs(phi, 0.95).unwrap();
    let one = enumerate_loss_patterns([q.q11, q.q20, q.q02], 0.8, 0.75);
    let (p20, p02, pn) = (one[1], one[2], one[3]);
    // two independent pairs, detector clicks unioned
    let no_t = (p02 + pn).powi(2);
    let no_r = (p20 + pn).powi(2);
    let two = [
        1.0 - no_t - no_r + pn * pn,
        no_r - pn * pn,
        no_t - pn * pn,
        pn * pn,
    ];
    let (p1, p2) = (0.2, 0.2 * 0.1);
    let expected = [
        p1 * one[0] + p2 * two[0],
        p1 * one[1] + p2 * two[1],
        p1 * one[2] + p2 * two[2],
        (1.0 - p1 - p2) + p1 * one[3] + p2 * two[3],
    ];
    let pulses = 2_000_000u64;
    let observed = tally_pulses(&cfg, phi, pulses, 3);
    assert_within_five_sigma(&observed, &expected, pulses);
}

#[test]
fn pair_bookkeeping_stays_below_the_adjusted_budget() {
    // the resource rule k_tilde = k (1 + xi)/eta_min deliberately
    // overestimates the true pairs per recorded trial
    let cfg = paper_source(5150);
    let phi = Phase::new(0.7).unwrap();
    let parts: Vec<_> = (0..8)
        .map(|s| simulate_trials_with_stream(&cfg, phi, 25_000, s).unwrap())
        .collect();
    let total = merge_counts(&parts);
    let per_trial = total.pairs_generated as f64 / total.recorded() as f64;
    let budget = (1.0 + 0.00155) / 0.95760519;
    assert!(
        per_trial < budget,
        "pairs per recorded trial {per_trial} exceeds the budget {budget}"
    );
    // and it should sit within a couple percent of it
    assert!((per_trial - budget).abs() / budget < 0.02);
}

#[test]
fn pairs_per_trial_grow_with_the_double_pair_fraction() {
    let phi = Phase::new(0.9).unwrap();
    let mut previous = 0.0;
    for xi in [0.0, 0.02, 0.08] {
        let model =
            InterferometerModel::with_constant_eta(0.989, 0.8026, 0.7941, xi, 0.0).unwrap();
        let cfg = SourceConfig::new(model, 0.01, 31).unwrap();
        let counts = simulate_trials(&cfg, phi, 60_000).unwrap();
        let per_trial = counts.pairs_generated as f64 / counts.recorded() as f64;
        assert!(
            per_trial > previous,
            "pairs per trial did not grow: {per_trial} after {previous} at xi={xi}"
        );
        previous = per_trial;
    }
}

#[test]
fn scan_output_is_independent_of_thread_count() {
    let cfg = paper_source(808);
    let phases: Vec<Phase> = (0..8).map(|i| Phase::new(i as f64 * 0.7).unwrap()).collect();
    let parallel = simulate_scan(&cfg, &phases, 500).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| simulate_scan(&cfg, &phases, 500).unwrap());
    assert_eq!(parallel, single);
}

#[test]
fn scan_csv_bytes_are_reproducible() {
    let cfg = paper_source(909);
    let phases: Vec<Phase> = (0..5).map(|i| Phase::new(0.1 + i as f64).unwrap()).collect();
    let a = simulate_scan(&cfg, &phases, 250).unwrap().to_csv_string().unwrap();
    let b = simulate_scan(&cfg, &phases, 250).unwrap().to_csv_string().unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("phi_rad,c11,c20,c02,pulses,pairs_true\n"));
    // full-precision float round trip through the text form
    let reparsed = noon_core::FringeScan::read_csv(a.as_bytes()).unwrap();
    for (row, phi) in reparsed.rows().iter().zip(&phases) {
        assert_eq!(row.phi.radians(), phi.radians());
    }
}

#[test]
fn per_pulse_detection_rate_matches_the_emission_model() {
    let cfg = paper_source(2);
    let phi = Phase::new(1.2).unwrap();
    let counts = simulate_trials(&cfg, phi, 20_000).unwrap();
    let rate = counts.recorded() as f64 / counts.pulses as f64;
    let det = recorded_probs(&paper_model(), phi);
    let beta1 = det.detection_prob();
    let beta2 = 1.0 - det.p_none * det.p_none;
    let expected = 0.0046 * (beta1 + 0.00155 * beta2);
    assert!(
        (rate - expected).abs() / expected < 0.05,
        "per-pulse rate {rate} vs expected {expected}"
    );
}
