//! Independent oracles and helpers shared by the integration tests.
//!
//! Everything here recomputes expectations from first principles
//! (operator algebra, exhaustive loss-pattern enumeration, multinomial
//! sampling) without touching the library's probability pipeline, so it
//! can vouch for it.
#![allow(dead_code)]

use noon_core::{EventCounts, InterferometerModel, SourceConfig};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use std::f64::consts::SQRT_2;

/// Output arms a photon can be routed to.
#[derive(Clone, Copy)]
enum Arm {
    Transmitted,
    Reflected,
}

/// Ideal two-photon outcome probabilities by brute force: both photons
/// through a half-wave plate at angle phi/4, expanded over the
/// creation-operator monomials of the splitter output modes.
/// Returns [P(one per output), P(both transmitted), P(both reflected)].
pub fn two_photon_amplitude_probs(phi: f64) -> [f64; 3] {
    let theta = phi / 4.0;
    let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    // wave-plate Jones matrix [[cos 2t, sin 2t], [sin 2t, -cos 2t]];
    // input operators map to its columns
    let photon_a = [c, s];
    let photon_b = [s, -c];
    // product of the two linear forms, collected on H^2, HV, V^2
    let c_hh = photon_a[0] * photon_b[0];
    let c_hv = photon_a[0] * photon_b[1] + photon_a[1] * photon_b[0];
    let c_vv = photon_a[1] * photon_b[1];
    // two-photon Fock amplitudes: (b_H^dag)^2 |0> = sqrt(2) |2,0>
    let a_20 = SQRT_2 * c_hh;
    let a_11 = c_hv;
    let a_02 = SQRT_2 * c_vv;
    [a_11 * a_11, a_20 * a_20, a_02 * a_02]
}

/// Recorded-class probabilities by exhaustive enumeration of the four
/// per-photon survival patterns for each outcome class.
/// Input `q` in order (one per output, both transmitted, both
/// reflected); returns [P11, P20, P02, Pnone].
pub fn enumerate_loss_patterns(q: [f64; 3], eta_t: f64, eta_r: f64) -> [f64; 4] {
    let classes: [(f64, [Arm; 2]); 3] = [
        (q[0], [Arm::Transmitted, Arm::Reflected]),
        (q[1], [Arm::Transmitted, Arm::Transmitted]),
        (q[2], [Arm::Reflected, Arm::Reflected]),
    ];
    let mut out = [0.0f64; 4];
    for (weight, arms) in classes {
        for pattern in 0u32..4 {
            let mut prob = weight;
            let mut click_t = false;
            let mut click_r = false;
            for (i, arm) in arms.iter().enumerate() {
                let survives = pattern & (1 << i) != 0;
                let eta = match arm {
                    Arm::Transmitted => eta_t,
                    Arm::Reflected => eta_r,
                };
                prob *= if survives { eta } else { 1.0 - eta };
                if survives {
                    match arm {
                        Arm::Transmitted => click_t = true,
                        Arm::Reflected => click_r = true,
                    }
                }
            }
            let idx = match (click_t, click_r) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            out[idx] += prob;
        }
    }
    out
}

/// Paper-parameter model: v = 0.989, eta_t = 0.8026, eta_r = 0.7941,
/// xi = 0.00155, no dark counts.
pub fn paper_model() -> InterferometerModel {
    InterferometerModel::with_constant_eta(0.989, 0.8026, 0.7941, 0.00155, 0.0).unwrap()
}

pub fn paper_source(seed: u64) -> SourceConfig {
    SourceConfig::new(paper_model(), 0.0046, seed).unwrap()
}

/// Multinomial counts over the three recorded classes, drawn by chained
/// binomials; a fast stand-in for a full pulse loop when only the
/// estimator is under test.
pub fn draw_multinomial_counts<R: Rng>(rng: &mut R, k: u64, p: [f64; 3]) -> EventCounts {
    let c11 = Binomial::new(k, p[0].clamp(0.0, 1.0))
        .unwrap()
        .sample(rng);
    let rest = k - c11;
    let p20_given = (p[1] / (1.0 - p[0])).clamp(0.0, 1.0);
    let c20 = Binomial::new(rest, p20_given).unwrap().sample(rng);
    EventCounts {
        c11,
        c20,
        c02: rest - c20,
        pulses: 2 * k,
        pairs_generated: 0,
    }
}

/// Merge tallies from independent substream chunks.
pub fn merge_counts(parts: &[EventCounts]) -> EventCounts {
    let mut total = EventCounts::default();
    for p in parts {
        total.c11 += p.c11;
        total.c20 += p.c20;
        total.c02 += p.c02;
        total.pulses += p.pulses;
        total.pairs_generated += p.pairs_generated;
    }
    total
}

/// Tally a fixed pulse-count acquisition window, chunked over parallel
/// substreams starting at `first_stream`.
pub fn tally_fixed_window(
    cfg: &SourceConfig,
    phi: noon_core::Phase,
    total_pulses: u64,
    chunks: u64,
    first_stream: u64,
) -> EventCounts {
    use rayon::prelude::*;
    let per_chunk = total_pulses / chunks;
    let parts: Vec<EventCounts> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = cfg.substream(first_stream + c);
            let mut counts = EventCounts::default();
            for _ in 0..per_chunk {
                counts.pulses += 1;
                if let Some(class) = noon_core::simulate_pulse(cfg, phi, &mut rng) {
                    counts.record(class);
                }
            }
            counts
        })
        .collect();
    merge_counts(&parts)
}

/// Synthetic fringe scan with multinomial counting noise, bypassing the
/// pulse loop; useful when only the fitters are under test.
pub fn multinomial_scan(
    model: &InterferometerModel,
    n_phases: usize,
    events_per_phase: u64,
    seed: u64,
) -> noon_core::FringeScan {
    use noon_core::{recorded_probs, Phase, ScanRow};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let rows = (0..n_phases)
        .map(|i| {
            let phi = Phase::new(i as f64 / n_phases as f64 * 2.0 * std::f64::consts::PI)
                .unwrap();
            let p = recorded_probs(model, phi).normalized();
            let counts = draw_multinomial_counts(&mut rng, events_per_phase, p);
            ScanRow { phi, counts }
        })
        .collect();
    noon_core::FringeScan::new(rows).unwrap()
}
