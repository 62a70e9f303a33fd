//! Seeded Monte Carlo generation of detection events per laser pulse.
//!
//! Every unit of work (scan row, sample, bootstrap resample) draws from a
//! dedicated ChaCha12 substream selected with `set_stream`, so outputs
//! are reproducible regardless of execution order or thread count. The
//! generator identity is exposed as [`RNG_ALGORITHM`] for run metadata.

use crate::error::SimError;
use crate::model::{ideal_unchecked, InterferometerModel, Phase};
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{Read, Write};

/// Default per-pulse single-pair emission probability. Operational
/// default chosen to give plausible count rates; not a measured value.
pub const DEFAULT_PAIR_PROB: f64 = 0.0046;

/// Default pulsed-laser repetition rate (metadata only).
pub const DEFAULT_REP_RATE_HZ: f64 = 81e6;

/// Default ceiling on pulses per trial request.
pub const DEFAULT_PULSE_GUARD: u64 = 10_000_000_000;

/// Identity of the counter-capable generator used for all substreams.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Source and run configuration for the pulse simulator.
#[derive(Debug, Clone)]
pub struct SourceConfig {
    model: InterferometerModel,
    pair_prob: f64,
    seed: u64,
    rep_rate_hz: f64,
    pulse_guard: u64,
}

impl SourceConfig {
    /// `pair_prob` is the per-pulse probability of exactly one pair;
    /// double pairs occur with probability `pair_prob * xi`.
    pub fn new(model: InterferometerModel, pair_prob: f64, seed: u64) -> Result<Self, SimError> {
        if !pair_prob.is_finite() || !(0.0..=1.0).contains(&pair_prob) {
            return Err(SimError::PairProb(pair_prob));
        }
        let emission = pair_prob * (1.0 + model.xi());
        if emission > 1.0 {
            return Err(SimError::EmissionRate(emission));
        }
        Ok(Self {
            model,
            pair_prob,
            seed,
            rep_rate_hz: DEFAULT_REP_RATE_HZ,
            pulse_guard: DEFAULT_PULSE_GUARD,
        })
    }

    pub fn with_rep_rate(mut self, hz: f64) -> Result<Self, SimError> {
        if !hz.is_finite() || hz <= 0.0 {
            return Err(SimError::RepRate(hz));
        }
        self.rep_rate_hz = hz;
        Ok(self)
    }

    pub fn with_pulse_guard(mut self, pulses: u64) -> Self {
        self.pulse_guard = pulses;
        self
    }

    pub fn model(&self) -> &InterferometerModel {
        &self.model
    }

    pub fn pair_prob(&self) -> f64 {
        self.pair_prob
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rep_rate_hz(&self) -> f64 {
        self.rep_rate_hz
    }

    pub fn pulse_guard(&self) -> u64 {
        self.pulse_guard
    }

    /// Independent generator for one unit of work: ChaCha12 keyed by the
    /// configured seed with the 64-bit stream id selecting the substream.
    pub fn substream(&self, stream: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Recorded event classes: both detectors, transmitted only, reflected only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventClass {
    Coincidence,
    TransmittedOnly,
    ReflectedOnly,
}

/// Event tallies plus acquisition bookkeeping.
///
/// `pairs_generated` counts true emitted pairs including undetected
/// ones. It is ground truth for validation only; calibration and
/// estimation must never read it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub c11: u64,
    pub c20: u64,
    pub c02: u64,
    pub pulses: u64,
    pub pairs_generated: u64,
}

impl EventCounts {
    pub fn recorded(&self) -> u64 {
        self.c11 + self.c20 + self.c02
    }

    pub fn record(&mut self, class: EventClass) {
        match class {
            EventClass::Coincidence => self.c11 += 1,
            EventClass::TransmittedOnly => self.c20 += 1,
            EventClass::ReflectedOnly => self.c02 += 1,
        }
    }

    /// Recorded-class proportions in order 11, 20, 02; `None` when no
    /// events were recorded.
    pub fn proportions(&self) -> Option<[f64; 3]> {
        let k = self.recorded();
        if k == 0 {
            return None;
        }
        let k = k as f64;
        Some([
            self.c11 as f64 / k,
            self.c20 as f64 / k,
            self.c02 as f64 / k,
        ])
    }
}

/// Per-phase sampling constants, precomputed outside the pulse loop.
struct PulseContext {
    p_one: f64,
    p_emit: f64,
    q11: f64,
    q_le_20: f64,
    eta_t: f64,
    eta_r: f64,
    dark: f64,
}

impl PulseContext {
    fn new(cfg: &SourceConfig, phi: Phase) -> Self {
        let model = cfg.model();
        let q = ideal_unchecked(phi, model.visibility());
        let p_one = cfg.pair_prob();
        Self {
            p_one,
            p_emit: p_one * (1.0 + model.xi()),
            q11: q.q11,
            q_le_20: q.q11 + q.q20,
            eta_t: model.eta_t().at(phi),
            eta_r: model.eta_r().at(phi),
            dark: model.dark_prob(),
        }
    }

    fn event_rate_is_zero(&self) -> bool {
        self.p_emit == 0.0 && self.dark == 0.0
    }
}

struct PulseOutcome {
    class: Option<EventClass>,
    pairs: u32,
}

fn draw_pulse<R: Rng>(ctx: &PulseContext, rng: &mut R) -> PulseOutcome {
    let u: f64 = rng.random();
    let pairs = if u < ctx.p_one {
        1
    } else if u < ctx.p_emit {
        2
    } else {
        0
    };

    let mut click_t = false;
    let mut click_r = false;
    for _ in 0..pairs {
        let w: f64 = rng.random();
        if w < ctx.q11 {
            // one photon in each output arm
            if rng.random::<f64>() < ctx.eta_t {
                click_t = true;
            }
            if rng.random::<f64>() < ctx.eta_r {
                click_r = true;
            }
        } else if w < ctx.q_le_20 {
            // both photons transmitted
            if rng.random::<f64>() < ctx.eta_t {
                click_t = true;
            }
            if rng.random::<f64>() < ctx.eta_t {
                click_t = true;
            }
        } else {
            // both photons reflected
            if rng.random::<f64>() < ctx.eta_r {
                click_r = true;
            }
            if rng.random::<f64>() < ctx.eta_r {
                click_r = true;
            }
        }
    }
    if ctx.dark > 0.0 {
        if rng.random::<f64>() < ctx.dark {
            click_t = true;
        }
        if rng.random::<f64>() < ctx.dark {
            click_r = true;
        }
    }

    let class = match (click_t, click_r) {
        (true, true) => Some(EventClass::Coincidence),
        (true, false) => Some(EventClass::TransmittedOnly),
        (false, true) => Some(EventClass::ReflectedOnly),
        (false, false) => None,
    };
    PulseOutcome { class, pairs }
}

/// Simulate one laser pulse, returning the recorded event class if any
/// detector clicked.
pub fn simulate_pulse<R: Rng>(cfg: &SourceConfig, phi: Phase, rng: &mut R) -> Option<EventClass> {
    draw_pulse(&PulseContext::new(cfg, phi), rng).class
}

/// Run pulses on substream `stream` until exactly `k` events have been
/// recorded. Fails if the configured pulse guard would be exceeded.
pub fn simulate_trials_with_stream(
    cfg: &SourceConfig,
    phi: Phase,
    k: u64,
    stream: u64,
) -> Result<EventCounts, SimError> {
    if k == 0 {
        return Err(SimError::ZeroTrials);
    }
    let ctx = PulseContext::new(cfg, phi);
    if ctx.event_rate_is_zero() {
        return Err(SimError::GuardLimit {
            limit: cfg.pulse_guard,
            recorded: 0,
            requested: k,
        });
    }
    let mut rng = cfg.substream(stream);
    let mut counts = EventCounts::default();
    while counts.recorded() < k {
        if counts.pulses >= cfg.pulse_guard {
            return Err(SimError::GuardLimit {
                limit: cfg.pulse_guard,
                recorded: counts.recorded(),
                requested: k,
            });
        }
        counts.pulses += 1;
        let out = draw_pulse(&ctx, &mut rng);
        counts.pairs_generated += u64::from(out.pairs);
        if let Some(class) = out.class {
            counts.record(class);
        }
    }
    Ok(counts)
}

/// [`simulate_trials_with_stream`] on substream 0, matching row 0 of a scan.
pub fn simulate_trials(cfg: &SourceConfig, phi: Phase, k: u64) -> Result<EventCounts, SimError> {
    simulate_trials_with_stream(cfg, phi, k, 0)
}

/// One fringe-scan row: phase plus tallies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub phi: Phase,
    pub counts: EventCounts,
}

/// Phase-ordered fringe scan, the calibration input and simulator output.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    rows: Vec<ScanRow>,
}

impl FringeScan {
    pub fn new(rows: Vec<ScanRow>) -> Result<Self, SimError> {
        if rows.is_empty() {
            return Err(SimError::EmptyPhases);
        }
        for w in rows.windows(2) {
            if w[0].phi.radians() >= w[1].phi.radians() {
                return Err(SimError::ScanPhases);
            }
        }
        for row in &rows {
            let phi = row.phi.radians();
            if !(0.0..2.0 * PI).contains(&phi) {
                return Err(SimError::ScanPhases);
            }
            if row.counts.recorded() > row.counts.pulses {
                return Err(SimError::InconsistentRow(format!(
                    "recorded events exceed pulses at phi = {phi}"
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ScanRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row whose phase is closest to `phi`.
    pub fn row_nearest(&self, phi: f64) -> &ScanRow {
        self.rows
            .iter()
            .min_by(|a, b| {
                let da = (a.phi.radians() - phi).abs();
                let db = (b.phi.radians() - phi).abs();
                da.partial_cmp(&db).unwrap()
            })
            .expect("scan is non-empty")
    }

    /// Write the scan as CSV with header
    /// `phi_rad,c11,c20,c02,pulses,pairs_true`. The `pairs_true` column
    /// is simulator ground truth and must be ignored by calibration.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SimError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(ScanRecord {
                phi_rad: row.phi.radians(),
                c11: row.counts.c11,
                c20: row.counts.c20,
                c02: row.counts.c02,
                pulses: row.counts.pulses,
                pairs_true: row.counts.pairs_generated,
            })
            .map_err(|e| SimError::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| SimError::Io(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, SimError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| SimError::Io(e.to_string()))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, SimError> {
        let mut reader = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        for record in reader.deserialize() {
            let rec: ScanRecord = record.map_err(|e| SimError::Io(e.to_string()))?;
            rows.push(ScanRow {
                phi: Phase::new(rec.phi_rad)?,
                counts: EventCounts {
                    c11: rec.c11,
                    c20: rec.c20,
                    c02: rec.c02,
                    pulses: rec.pulses,
                    pairs_generated: rec.pairs_true,
                },
            });
        }
        Self::new(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct ScanRecord {
    phi_rad: f64,
    c11: u64,
    c20: u64,
    c02: u64,
    pulses: u64,
    pairs_true: u64,
}

/// Simulate a fringe scan with `events_per_phase` recorded events per
/// row. Row `i` draws from substream `i`, so rows are reproducible
/// independently of evaluation order; generation runs in parallel.
pub fn simulate_scan(
    cfg: &SourceConfig,
    phases: &[Phase],
    events_per_phase: u64,
) -> Result<FringeScan, SimError> {
    if phases.is_empty() {
        return Err(SimError::EmptyPhases);
    }
    let rows = phases
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| {
            simulate_trials_with_stream(cfg, phi, events_per_phase, i as u64)
                .map(|counts| ScanRow { phi, counts })
        })
        .collect::<Result<Vec<_>, _>>()?;
    FringeScan::new(rows)
}
