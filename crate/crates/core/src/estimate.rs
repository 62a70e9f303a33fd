//! Fisher-information analysis, shot-noise-limit resource accounting,
//! per-sample phase estimation, and bootstrap uncertainty.
//!
//! The Fisher information per recorded trial is
//! F(phi) = sum_i (d ln p_i / d phi)^2 p_i over the three recorded event
//! classes. The loss-adjusted shot-noise benchmark per recorded trial is
//! F_SNL = N (1 + xi) / eta_min(phi), the information a lossless
//! classical probe would extract from the same number of photons once
//! undetected and multi-pair trials are charged to the budget.

use crate::calib::{rebuild_with_shifted_eta, rebuild_with_visibility, CalibrationCurves};
use crate::error::EstimateError;
use crate::model::{eta_min, recorded_probs, InterferometerModel, Phase, PHOTON_NUMBER};
use crate::optim::golden_section_min;
use crate::sim::{simulate_trials_with_stream, EventCounts, SourceConfig};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::io::{Read, Write};

/// Fisher information per recorded trial at the plain shot-noise limit.
pub const SNL_FISHER: f64 = PHOTON_NUMBER as f64;

/// Heisenberg ceiling N^2 on the Fisher information for this model.
pub const FISHER_CEILING: f64 = (PHOTON_NUMBER * PHOTON_NUMBER) as f64;

/// Default phase-estimate search range.
pub const SEARCH_RANGE: (f64, f64) = (0.0, FRAC_PI_2);

/// Default bootstrap resample count.
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 10_000;

const GRID_POINTS: usize = 2000;
const REFINE_TOL: f64 = 1e-9;
const FD_STEP: f64 = 1e-5;
/// Below this probability a fringe term switches to its analytic limit.
const P_FLOOR: f64 = 1e-12;

/// Linear-in-cos(2 phi) coefficients of the recorded-class probabilities
/// for a constant-transmission model: P_i = a_i + b_i cos(2 phi).
struct FringeCoefficients {
    a: [f64; 3],
    b: [f64; 3],
    a_norm: f64,
    b_norm: f64,
}

fn fringe_coefficients(v: f64, et: f64, er: f64) -> FringeCoefficients {
    let lt = 1.0 - et;
    let lr = 1.0 - er;
    let alpha_t = 1.0 - lt * lt;
    let alpha_r = 1.0 - lr * lr;
    let a = [
        et * er / 2.0,
        alpha_t / 4.0 + et * lr / 2.0,
        alpha_r / 4.0 + er * lt / 2.0,
    ];
    let b = [
        v * et * er / 2.0,
        v * (et * lr / 2.0 - alpha_t / 4.0),
        v * (er * lt / 2.0 - alpha_r / 4.0),
    ];
    // normalization D = 1 - P_none = sum_i P_i
    FringeCoefficients {
        a_norm: a.iter().sum(),
        b_norm: b.iter().sum(),
        a,
        b,
    }
}

/// Fisher information from closed-form derivatives. Only defined for
/// constant transmission profiles; returns `None` otherwise.
///
/// Where a class probability vanishes (fringe extremes at full
/// visibility) its term takes the finite analytic limit -8 b_i c0 / D
/// instead of the indeterminate 0/0 ratio.
pub fn fisher_analytic(model: &InterferometerModel, phi: Phase) -> Option<f64> {
    if !model.has_constant_eta() {
        return None;
    }
    let coeff = fringe_coefficients(
        model.visibility(),
        model.eta_t().at(phi),
        model.eta_r().at(phi),
    );
    let c = (2.0 * phi.radians()).cos();
    let s = (2.0 * phi.radians()).sin();
    let d = coeff.a_norm + coeff.b_norm * c;
    let mut fisher = 0.0;
    for i in 0..3 {
        let p = (coeff.a[i] + coeff.b[i] * c) / d;
        if p >= P_FLOOR {
            // d p / d phi = -2 s (b_i D_a - a_i D_b) / D^2 with D = D_a + D_b c
            let dp = -2.0 * s * (coeff.b[i] * coeff.a_norm - coeff.a[i] * coeff.b_norm)
                / (d * d);
            fisher += dp * dp / p;
        } else if coeff.b[i] != 0.0 {
            let c0 = if c >= 0.0 { 1.0 } else { -1.0 };
            fisher += -8.0 * coeff.b[i] * c0 / d;
        }
    }
    Some(fisher)
}

/// Fisher information from central finite differences on the recorded
/// probabilities, valid for any transmission profile.
pub fn fisher_fd(model: &InterferometerModel, phi: Phase) -> f64 {
    let x = phi.radians();
    let p0 = recorded_probs(model, phi).normalized();
    let pp = recorded_probs(model, Phase::new(x + FD_STEP).expect("finite phase")).normalized();
    let pm = recorded_probs(model, Phase::new(x - FD_STEP).expect("finite phase")).normalized();
    let mut fisher = 0.0;
    for i in 0..3 {
        if p0[i] >= P_FLOOR {
            let dp = (pp[i] - pm[i]) / (2.0 * FD_STEP);
            fisher += dp * dp / p0[i];
        } else {
            // vanishing class: term tends to 2 p'' at the extreme
            let second = (pp[i] - 2.0 * p0[i] + pm[i]) / (FD_STEP * FD_STEP);
            fisher += (2.0 * second).max(0.0);
        }
    }
    fisher
}

/// Fisher information per recorded trial, dispatching to the analytic
/// form when the model's transmissions are constant.
pub fn fisher_information(model: &InterferometerModel, phi: Phase) -> f64 {
    fisher_analytic(model, phi).unwrap_or_else(|| fisher_fd(model, phi))
}

/// Fisher information against the adjusted shot-noise level on a phase
/// grid, with a 95% confidence band from calibration uncertainties.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherCurve {
    pub phis: Vec<f64>,
    pub fisher: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Unadjusted shot-noise level N, constant across the grid.
    pub snl: Vec<f64>,
    /// Adjusted level N (1 + xi) / eta_min(phi).
    pub snl_adjusted: Vec<f64>,
}

impl FisherCurve {
    /// Largest Fisher value and the phase where it occurs.
    pub fn peak(&self) -> (f64, f64) {
        let mut best = (self.phis[0], self.fisher[0]);
        for (phi, f) in self.phis.iter().zip(&self.fisher) {
            if *f > best.1 {
                best = (*phi, *f);
            }
        }
        (best.1, best.0)
    }

    /// Phases where the Fisher information exceeds the adjusted SNL.
    pub fn violation_phases(&self) -> Vec<f64> {
        self.phis
            .iter()
            .zip(self.fisher.iter().zip(&self.snl_adjusted))
            .filter(|(_, (f, snl))| f > snl)
            .map(|(phi, _)| *phi)
            .collect()
    }

    /// CSV with header `phi_rad,fisher,f_lo,f_hi,snl,snl_adjusted`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), EstimateError> {
        let mut w = csv::Writer::from_writer(out);
        for i in 0..self.phis.len() {
            w.serialize(FisherRecord {
                phi_rad: self.phis[i],
                fisher: self.fisher[i],
                f_lo: self.lo[i],
                f_hi: self.hi[i],
                snl: self.snl[i],
                snl_adjusted: self.snl_adjusted[i],
            })
            .map_err(|e| EstimateError::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| EstimateError::Io(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, EstimateError> {
        let mut reader = csv::Reader::from_reader(input);
        let mut curve = FisherCurve {
            phis: vec![],
            fisher: vec![],
            lo: vec![],
            hi: vec![],
            snl: vec![],
            snl_adjusted: vec![],
        };
        for record in reader.deserialize() {
            let rec: FisherRecord = record.map_err(|e| EstimateError::Io(e.to_string()))?;
            curve.phis.push(rec.phi_rad);
            curve.fisher.push(rec.fisher);
            curve.lo.push(rec.f_lo);
            curve.hi.push(rec.f_hi);
            curve.snl.push(rec.snl);
            curve.snl_adjusted.push(rec.snl_adjusted);
        }
        if curve.phis.is_empty() {
            return Err(EstimateError::Io("empty fisher curve".into()));
        }
        Ok(curve)
    }
}

#[derive(Serialize, Deserialize)]
struct FisherRecord {
    phi_rad: f64,
    fisher: f64,
    f_lo: f64,
    f_hi: f64,
    snl: f64,
    snl_adjusted: f64,
}

/// Evaluate the Fisher curve of calibrated curves over a phase grid.
///
/// The confidence band propagates the calibration parameter
/// uncertainties to first order by re-evaluating F with each parameter
/// perturbed by +-1 sigma and combining the half-spreads in quadrature
/// (scaled to 95%).
pub fn fisher_curve(
    curves: &CalibrationCurves,
    phis: &[Phase],
) -> Result<FisherCurve, EstimateError> {
    if phis.is_empty() {
        return Err(EstimateError::InvalidInput("empty phase grid".into()));
    }
    let model = &curves.model;
    let xi = model.xi();
    let mut out = FisherCurve {
        phis: Vec::with_capacity(phis.len()),
        fisher: Vec::with_capacity(phis.len()),
        lo: Vec::with_capacity(phis.len()),
        hi: Vec::with_capacity(phis.len()),
        snl: Vec::with_capacity(phis.len()),
        snl_adjusted: Vec::with_capacity(phis.len()),
    };
    for &phi in phis {
        let f = fisher_information(model, phi);
        if !(-1e-9..=FISHER_CEILING + 1e-6).contains(&f) {
            return Err(EstimateError::InvalidInput(format!(
                "fisher information {f} outside [0, N^2] at phi = {}",
                phi.radians()
            )));
        }
        let mut var = 0.0;
        let mut add_half_spread =
            |plus: Option<InterferometerModel>, minus: Option<InterferometerModel>| {
                if let (Some(p), Some(m)) = (plus, minus) {
                    let d = (fisher_information(&p, phi) - fisher_information(&m, phi)) / 2.0;
                    var += d * d;
                }
            };
        if curves.visibility_err > 0.0 {
            add_half_spread(
                rebuild_with_visibility(model, model.visibility() + curves.visibility_err),
                rebuild_with_visibility(model, model.visibility() - curves.visibility_err),
            );
        }
        let et_err = curves.eta_t_err_at(phi);
        if et_err > 0.0 {
            add_half_spread(
                rebuild_with_shifted_eta(model, et_err, 0.0),
                rebuild_with_shifted_eta(model, -et_err, 0.0),
            );
        }
        let er_err = curves.eta_r_err_at(phi);
        if er_err > 0.0 {
            add_half_spread(
                rebuild_with_shifted_eta(model, 0.0, er_err),
                rebuild_with_shifted_eta(model, 0.0, -er_err),
            );
        }
        let half_band = 1.96 * var.sqrt();
        out.phis.push(phi.radians());
        out.fisher.push(f.max(0.0));
        out.lo.push((f - half_band).max(0.0));
        out.hi.push(f + half_band);
        out.snl.push(SNL_FISHER);
        out.snl_adjusted
            .push(SNL_FISHER * (1.0 + xi) / eta_min(model, phi));
    }
    Ok(out)
}

/// Loss- and multi-pair-adjusted resource account for `k` recorded trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceAccount {
    pub recorded_trials: u64,
    pub xi: f64,
    pub eta_min: f64,
    /// Trial inflation k_tilde / k = (1 + xi) / eta_min.
    pub inflation: f64,
    /// Actual trials k_tilde that passed the phase shift.
    pub actual_trials: f64,
    /// Photon resources n = N k_tilde charged to the classical benchmark.
    pub resources: f64,
    /// Adjusted shot-noise Fisher level N k_tilde / k.
    pub f_snl: f64,
}

impl ResourceAccount {
    /// Total resources n_tot = N k_tilde s across `samples` repetitions.
    pub fn total_resources(&self, samples: u64) -> f64 {
        self.resources * samples as f64
    }
}

/// Build the resource account k_tilde = k (1 + xi) / eta_min.
pub fn snl_adjusted(k: u64, xi: f64, eta_min: f64) -> Result<ResourceAccount, EstimateError> {
    if k == 0 {
        return Err(EstimateError::InvalidInput("k must be >= 1".into()));
    }
    if !xi.is_finite() || xi < 0.0 {
        return Err(EstimateError::InvalidInput(format!("xi {xi} must be >= 0")));
    }
    if !eta_min.is_finite() || eta_min <= 0.0 || eta_min > 1.0 {
        return Err(EstimateError::InvalidInput(format!(
            "eta_min {eta_min} outside (0, 1]"
        )));
    }
    let inflation = (1.0 + xi) / eta_min;
    let actual_trials = k as f64 * inflation;
    Ok(ResourceAccount {
        recorded_trials: k,
        xi,
        eta_min,
        inflation,
        actual_trials,
        resources: SNL_FISHER * actual_trials,
        f_snl: SNL_FISHER * inflation,
    })
}

/// Shot-noise-limited standard deviation of the mean, 1/sqrt(n_tot).
pub fn snl_sem(n_tot: f64) -> f64 {
    debug_assert!(n_tot >= 1.0);
    1.0 / n_tot.sqrt()
}

/// A single least-squares phase estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate {
    pub phi_est: f64,
    pub objective: f64,
    /// Set when the minimum sits at an edge of the search range.
    pub at_boundary: bool,
}

/// Least-squares phase estimate from recorded counts: minimizes
/// sum_i (c_i/k - p_i(phi))^2 over the default [0, pi/2] search range.
pub fn estimate_phase(
    counts: &EventCounts,
    model: &InterferometerModel,
) -> Result<PhaseEstimate, EstimateError> {
    let p_hat = counts
        .proportions()
        .ok_or_else(|| EstimateError::InvalidInput("no recorded events".into()))?;
    Ok(estimate_phase_from_probs(p_hat, model))
}

/// [`estimate_phase`] on pre-normalized class probabilities.
pub fn estimate_phase_from_probs(p_hat: [f64; 3], model: &InterferometerModel) -> PhaseEstimate {
    estimate_phase_in_range(p_hat, model, SEARCH_RANGE.0, SEARCH_RANGE.1)
}

/// Grid scan (2000 points) followed by golden-section refinement to
/// 1e-9 rad; ties break toward the smaller phase and boundary minima
/// are flagged, not clamped away.
pub fn estimate_phase_in_range(
    p_hat: [f64; 3],
    model: &InterferometerModel,
    lo: f64,
    hi: f64,
) -> PhaseEstimate {
    debug_assert!(lo < hi);
    let objective = |x: f64| -> f64 {
        let p = recorded_probs(model, Phase::new(x).expect("finite search phase")).normalized();
        (0..3).map(|i| (p_hat[i] - p[i]).powi(2)).sum()
    };
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut best_i = 0usize;
    let mut best_f = f64::INFINITY;
    for i in 0..GRID_POINTS {
        let f = objective(lo + i as f64 * step);
        if f < best_f {
            best_f = f;
            best_i = i;
        }
    }
    let bracket_lo = (lo + (best_i as f64 - 1.0) * step).max(lo);
    let bracket_hi = (lo + (best_i as f64 + 1.0) * step).min(hi);
    let (mut x, mut fx) = golden_section_min(objective, bracket_lo, bracket_hi, REFINE_TOL);
    // a flat objective should resolve to the smaller phase
    let f_edge = objective(bracket_lo);
    if f_edge <= fx && bracket_lo < x {
        x = bracket_lo;
        fx = f_edge;
    }
    PhaseEstimate {
        phi_est: x,
        objective: fx,
        at_boundary: x <= lo + REFINE_TOL || x >= hi - REFINE_TOL,
    }
}

/// Simulate `samples` independent acquisitions of `k` recorded trials at
/// a fixed true phase (sample j on substream j) and estimate each one
/// against the calibrated model.
pub fn run_phase_samples(
    cfg: &SourceConfig,
    model: &InterferometerModel,
    phi_true: Phase,
    k: u64,
    samples: u64,
) -> Result<Vec<PhaseEstimate>, EstimateError> {
    (0..samples)
        .into_par_iter()
        .map(|j| {
            let counts = simulate_trials_with_stream(cfg, phi_true, k, j)?;
            estimate_phase(&counts, model)
        })
        .collect()
}

/// Mean, spread, and standard error of a batch of phase estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub samples: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub sem: f64,
    pub boundary_hits: usize,
}

/// Sample mean, standard deviation (n-1 denominator), and
/// sem = std_dev / sqrt(s).
pub fn aggregate_samples(estimates: &[PhaseEstimate]) -> Result<SampleStats, EstimateError> {
    let s = estimates.len();
    if s < 2 {
        return Err(EstimateError::InvalidInput(
            "need at least two samples".into(),
        ));
    }
    let mean = estimates.iter().map(|e| e.phi_est).sum::<f64>() / s as f64;
    let ss: f64 = estimates
        .iter()
        .map(|e| (e.phi_est - mean).powi(2))
        .sum();
    let std_dev = (ss / (s - 1) as f64).sqrt();
    Ok(SampleStats {
        samples: s,
        mean,
        std_dev,
        sem: std_dev / (s as f64).sqrt(),
        boundary_hits: estimates.iter().filter(|e| e.at_boundary).count(),
    })
}

/// Bootstrap estimate of the standard deviation of the mean with a 95%
/// percentile confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSem {
    pub sem: f64,
    pub ci: (f64, f64),
    pub resamples: usize,
}

/// Nonparametric bootstrap: resample the values with replacement
/// `resamples` times (resample b on substream b of `seed`), take the
/// spread of the resample means as the sem, and the 2.5/97.5 percentiles
/// of the per-resample sem values as its confidence interval.
pub fn bootstrap_sem(
    values: &[f64],
    resamples: usize,
    seed: u64,
) -> Result<BootstrapSem, EstimateError> {
    let s = values.len();
    if s < 10 {
        return Err(EstimateError::InvalidInput(
            "bootstrap needs at least 10 values".into(),
        ));
    }
    if resamples < 1000 {
        return Err(EstimateError::InvalidInput(
            "bootstrap needs at least 1000 resamples".into(),
        ));
    }
    // a constant sample has exactly zero spread; skip the resampling
    // noise floor entirely
    if values.iter().all(|v| *v == values[0]) {
        return Ok(BootstrapSem {
            sem: 0.0,
            ci: (0.0, 0.0),
            resamples,
        });
    }

    let draws: Vec<(f64, f64)> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut resample = Vec::with_capacity(s);
            for _ in 0..s {
                resample.push(values[rng.random_range(0..s)]);
            }
            let mean = resample.iter().sum::<f64>() / s as f64;
            let ss: f64 = resample.iter().map(|x| (x - mean).powi(2)).sum();
            let sem_b = (ss / (s - 1) as f64 / s as f64).sqrt();
            (mean, sem_b)
        })
        .collect();

    let mean_of_means = draws.iter().map(|d| d.0).sum::<f64>() / resamples as f64;
    let var_means = draws
        .iter()
        .map(|d| (d.0 - mean_of_means).powi(2))
        .sum::<f64>()
        / (resamples - 1) as f64;
    let mut sems: Vec<f64> = draws.iter().map(|d| d.1).collect();
    sems.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(BootstrapSem {
        sem: var_means.sqrt(),
        ci: (percentile(&sems, 0.025), percentile(&sems, 0.975)),
        resamples,
    })
}

/// Linear-interpolated percentile of pre-sorted values.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// Per-sample estimates with their aggregate statistics, bootstrap
/// uncertainty, and the matched classical benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEstimateBatch {
    pub estimates: Vec<PhaseEstimate>,
    pub stats: SampleStats,
    pub bootstrap: BootstrapSem,
    pub account: ResourceAccount,
    pub recorded_per_sample: u64,
    /// 1/sqrt(N k_tilde s), the matched shot-noise benchmark.
    pub snl_sem: f64,
    /// 1/sqrt(s k F(phi)), the Cramer-Rao expectation.
    pub crb_sem: f64,
}

impl PhaseEstimateBatch {
    pub fn assemble(
        estimates: Vec<PhaseEstimate>,
        k: u64,
        account: ResourceAccount,
        fisher_at_true: f64,
        bootstrap_resamples: usize,
        bootstrap_seed: u64,
    ) -> Result<Self, EstimateError> {
        let stats = aggregate_samples(&estimates)?;
        let values: Vec<f64> = estimates.iter().map(|e| e.phi_est).collect();
        let bootstrap = bootstrap_sem(&values, bootstrap_resamples, bootstrap_seed)?;
        let s = stats.samples as u64;
        let snl = snl_sem(account.total_resources(s));
        let crb = 1.0 / ((s * k) as f64 * fisher_at_true).sqrt();
        Ok(Self {
            estimates,
            stats,
            bootstrap,
            account,
            recorded_per_sample: k,
            snl_sem: snl,
            crb_sem: crb,
        })
    }

    pub fn beats_snl(&self) -> bool {
        self.stats.sem < self.snl_sem
    }

    /// Per-sample CSV with header `sample_id,phi_est_rad`.
    pub fn write_samples_csv<W: Write>(&self, out: W) -> Result<(), EstimateError> {
        let mut w = csv::Writer::from_writer(out);
        for (i, e) in self.estimates.iter().enumerate() {
            w.serialize(SampleRecord {
                sample_id: i as u64,
                phi_est_rad: e.phi_est,
            })
            .map_err(|e| EstimateError::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| EstimateError::Io(e.to_string()))?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SampleRecord {
    sample_id: u64,
    phi_est_rad: f64,
}

/// Serialized summary of a [`PhaseEstimateBatch`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchDocument {
    pub format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi_true: Option<f64>,
    pub estimates_file: String,
    pub mean: f64,
    pub sem: f64,
    pub sem_ci: [f64; 2],
    pub snl_sem: f64,
    pub crb_sem: f64,
    pub k: u64,
    pub s: u64,
    pub k_tilde_ratio: f64,
    pub boundary_hits: u64,
    pub beats_snl: bool,
    pub seed: u64,
    pub rng: String,
}

pub const BATCH_FORMAT_VERSION: u32 = 1;

impl BatchDocument {
    pub fn new(
        batch: &PhaseEstimateBatch,
        phi_true: Option<f64>,
        estimates_file: String,
        seed: u64,
    ) -> Self {
        Self {
            format_version: BATCH_FORMAT_VERSION,
            phi_true,
            estimates_file,
            mean: batch.stats.mean,
            sem: batch.stats.sem,
            sem_ci: [batch.bootstrap.ci.0, batch.bootstrap.ci.1],
            snl_sem: batch.snl_sem,
            crb_sem: batch.crb_sem,
            k: batch.recorded_per_sample,
            s: batch.stats.samples as u64,
            k_tilde_ratio: batch.account.inflation,
            boundary_hits: batch.stats.boundary_hits as u64,
            beats_snl: batch.beats_snl(),
            seed,
            rng: crate::sim::RNG_ALGORITHM.to_string(),
        }
    }

    pub fn to_json_string(&self) -> Result<String, EstimateError> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| EstimateError::Io(e.to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self, EstimateError> {
        serde_json::from_str(text).map_err(|e| EstimateError::Io(e.to_string()))
    }
}
