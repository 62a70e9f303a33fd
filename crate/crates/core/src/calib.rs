//! Recovery of model parameters (visibility, per-phase transmissions,
//! double-pair fraction) from fringe-scan data.
//!
//! The pipeline mirrors the measurement procedure: transmission ratios
//! at the coincidence maximum seed a global least-squares fit of
//! (v, eta_t, eta_r) to all three normalized fringes, per-phase
//! transmissions are then refined inside a bounded variation window, and
//! the double-pair fraction is recovered from detection totals versus
//! pulse counts.

use crate::error::CalibError;
use crate::model::{
    ideal_unchecked, lossy_unchecked, recorded_probs, InterferometerModel, Phase,
    TransmissionProfile,
};
use crate::optim::{nelder_mead, polish_axes};
use crate::sim::{EventCounts, FringeScan};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Minimum number of scan phases accepted by the fitters.
pub const MIN_FIT_PHASES: usize = 8;

/// Fraction of a fringe period the scan must cover.
const MIN_SPAN_FRACTION: f64 = 0.9;

/// Accepted fringe-fit phase offset for a calibrated setup.
pub const MAX_PHASE_OFFSET: f64 = 0.05;

/// Half-width of the per-phase transmission search box around the
/// global fit, chosen so the profile max/min stays within the 1.02
/// variation invariant.
const VARIATION_CAP: f64 = 0.009;

/// Upper end of the double-pair-fraction root search.
const XI_SEARCH_MAX: f64 = 0.2;

/// A single recovered efficiency with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionEstimate {
    pub value: f64,
    pub std_err: f64,
}

/// Transmission ratios at the coincidence fringe maximum:
/// eta_r = c11/(c11+c20) and eta_t = c11/(c11+c02), with binomial
/// standard errors. Returned in (eta_r, eta_t) order.
pub fn transmissions_at_zero(
    counts: &EventCounts,
) -> Result<(TransmissionEstimate, TransmissionEstimate), CalibError> {
    if counts.c11 == 0 {
        return Err(CalibError::NoCoincidences);
    }
    let ratio = |c11: u64, other: u64| {
        let n = (c11 + other) as f64;
        let value = c11 as f64 / n;
        TransmissionEstimate {
            value,
            std_err: (value * (1.0 - value) / n).sqrt(),
        }
    };
    Ok((
        ratio(counts.c11, counts.c20),
        ratio(counts.c11, counts.c02),
    ))
}

/// Result of the sinusoidal fringe fit to the normalized coincidence
/// probabilities.
///
/// The fitted form is A(1 + v cos(2 phi + phi0)) + B. Because A, v and
/// B only enter through A+B and A*v, the baseline B is not separately
/// identifiable and is fixed to zero; `phase_offset` reports phi0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityFit {
    pub visibility: f64,
    pub std_err: f64,
    pub phase_offset: f64,
    pub baseline: f64,
    pub residual_rms: f64,
    pub offset_ok: bool,
}

fn coverage_check(scan: &FringeScan) -> Result<(), CalibError> {
    let n = scan.len();
    if n < MIN_FIT_PHASES {
        return Err(CalibError::InsufficientCoverage {
            min: MIN_FIT_PHASES,
            got: n,
        });
    }
    let first = scan.rows().first().unwrap().phi.radians();
    let last = scan.rows().last().unwrap().phi.radians();
    if last - first < MIN_SPAN_FRACTION * std::f64::consts::PI {
        return Err(CalibError::InsufficientCoverage {
            min: MIN_FIT_PHASES,
            got: n,
        });
    }
    Ok(())
}

fn normalized_rows(scan: &FringeScan) -> Result<Vec<(Phase, [f64; 3], f64)>, CalibError> {
    scan.rows()
        .iter()
        .map(|row| {
            let k = row.counts.recorded();
            row.counts
                .proportions()
                .map(|p| (row.phi, p, k as f64))
                .ok_or_else(|| {
                    CalibError::FitFailure(format!(
                        "no recorded events at phi = {}",
                        row.phi.radians()
                    ))
                })
        })
        .collect()
}

/// Least-squares fit of the normalized coincidence fringe, returning the
/// visibility with its standard error from the fit covariance.
pub fn fit_visibility(scan: &FringeScan) -> Result<VisibilityFit, CalibError> {
    coverage_check(scan)?;
    let rows = normalized_rows(scan)?;

    // linear model p11 ~ c0 + a cos(2 phi) + b sin(2 phi)
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [0.0f64; 3];
    for (phi, p, _) in &rows {
        let x = [1.0, (2.0 * phi.radians()).cos(), (2.0 * phi.radians()).sin()];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += x[i] * x[j];
            }
            xty[i] += x[i] * p[0];
        }
    }
    let cov_unscaled = inv3(&xtx)
        .ok_or_else(|| CalibError::FitFailure("degenerate fringe design matrix".into()))?;
    let theta = mat3_mul_vec(&cov_unscaled, &xty);
    let (c0, a, b) = (theta[0], theta[1], theta[2]);
    if c0 <= 0.0 {
        return Err(CalibError::FitFailure(
            "non-positive mean coincidence probability".into(),
        ));
    }

    let n = rows.len() as f64;
    let ssr: f64 = rows
        .iter()
        .map(|(phi, p, _)| {
            let f = c0
                + a * (2.0 * phi.radians()).cos()
                + b * (2.0 * phi.radians()).sin();
            (p[0] - f).powi(2)
        })
        .sum();
    let s2 = ssr / (n - 3.0);

    let amplitude = a.hypot(b);
    let visibility = amplitude / c0;
    let std_err = if amplitude > 1e-14 {
        // delta method on v = sqrt(a^2 + b^2) / c0
        let g = [
            -amplitude / (c0 * c0),
            a / (amplitude * c0),
            b / (amplitude * c0),
        ];
        let mut var = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                var += g[i] * cov_unscaled[i][j] * g[j];
            }
        }
        (var.max(0.0) * s2).sqrt()
    } else {
        ((cov_unscaled[1][1] + cov_unscaled[2][2]).max(0.0) * s2).sqrt() / c0
    };

    if !visibility.is_finite() || visibility > 1.0 + 3.0 * std_err + 1e-9 {
        return Err(CalibError::VisibilityOutOfRange {
            v: visibility,
            sigma: std_err,
        });
    }

    let phase_offset = if amplitude > 1e-14 {
        (-b).atan2(a)
    } else {
        0.0
    };
    Ok(VisibilityFit {
        visibility,
        std_err,
        phase_offset,
        baseline: 0.0,
        residual_rms: (ssr / n).sqrt(),
        offset_ok: phase_offset.abs() <= MAX_PHASE_OFFSET,
    })
}

/// Fit diagnostics attached to calibration output.
#[derive(Debug, Clone, PartialEq)]
pub struct FitMetadata {
    pub residual_sum_squares: f64,
    pub converged: bool,
    pub phase_offset: f64,
    pub baseline: f64,
    pub evaluations: usize,
    /// Worst-case fitted max/min transmission ratio minus one, over both arms.
    pub max_transmission_variation: f64,
    /// Per-phase fits pinned at the variation search box.
    pub clamped_phases: usize,
}

/// Calibrated model parameters with uncertainties: the product of
/// [`fit_model`], consumed by the Fisher and phase estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationCurves {
    pub model: InterferometerModel,
    pub visibility_err: f64,
    /// Standard errors aligned with the tabulated transmission grid
    /// (single entry for constant profiles).
    pub eta_t_err: Vec<f64>,
    pub eta_r_err: Vec<f64>,
    pub xi_err: f64,
    pub fit: FitMetadata,
}

impl CalibrationCurves {
    /// Curves taken from a known model with zero parameter uncertainty,
    /// for pipelines where the ground truth is available.
    pub fn exact(model: InterferometerModel) -> Self {
        Self {
            model,
            visibility_err: 0.0,
            eta_t_err: vec![0.0],
            eta_r_err: vec![0.0],
            xi_err: 0.0,
            fit: FitMetadata {
                residual_sum_squares: 0.0,
                converged: true,
                phase_offset: 0.0,
                baseline: 0.0,
                evaluations: 0,
                max_transmission_variation: 0.0,
                clamped_phases: 0,
            },
        }
    }

    /// Replace the embedded double-pair fraction, e.g. after [`estimate_xi`].
    pub fn with_xi(mut self, xi: f64, xi_err: f64) -> Result<Self, CalibError> {
        self.model = InterferometerModel::new(
            self.model.visibility(),
            self.model.eta_t().clone(),
            self.model.eta_r().clone(),
            xi,
            self.model.dark_prob(),
        )?;
        self.xi_err = xi_err;
        Ok(self)
    }

    fn err_at(errs: &[f64], profile: &TransmissionProfile, phi: Phase) -> f64 {
        match profile {
            TransmissionProfile::Constant(_) => errs.first().copied().unwrap_or(0.0),
            TransmissionProfile::Tabulated { phis, .. } => {
                let x = phi.wrapped().radians();
                let mut best = 0usize;
                let mut dist = f64::INFINITY;
                for (i, &p) in phis.iter().enumerate() {
                    let d = (p - x).abs();
                    if d < dist {
                        dist = d;
                        best = i;
                    }
                }
                errs.get(best).copied().unwrap_or(0.0)
            }
        }
    }

    pub fn eta_t_err_at(&self, phi: Phase) -> f64 {
        Self::err_at(&self.eta_t_err, self.model.eta_t(), phi)
    }

    pub fn eta_r_err_at(&self, phi: Phase) -> f64 {
        Self::err_at(&self.eta_r_err, self.model.eta_r(), phi)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), CalibError> {
        let doc = CalibrationDoc::from_curves(self);
        let text = serde_json::to_string_pretty(&doc).map_err(|e| CalibError::Io(e.to_string()))?;
        out.write_all(text.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| CalibError::Io(e.to_string()))
    }

    pub fn to_json_string(&self) -> Result<String, CalibError> {
        let mut buf = Vec::new();
        self.write_json(&mut buf)?;
        String::from_utf8(buf).map_err(|e| CalibError::Io(e.to_string()))
    }

    pub fn read_json<R: Read>(mut input: R) -> Result<Self, CalibError> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .map_err(|e| CalibError::Io(e.to_string()))?;
        let doc: CalibrationDoc =
            serde_json::from_str(&text).map_err(|e| CalibError::Io(e.to_string()))?;
        doc.into_curves()
    }
}

/// Global-plus-per-phase least-squares fit of the interferometer model
/// to all three normalized count fringes.
///
/// Near the coincidence minima the per-phase problem is poorly
/// conditioned; those phases come back with widened uncertainties (and
/// possibly pinned at the variation box), not as failures.
pub fn fit_model(scan: &FringeScan) -> Result<CalibrationCurves, CalibError> {
    coverage_check(scan)?;
    let vis = fit_visibility(scan)?;
    let rows = normalized_rows(scan)?;

    // seed transmissions from the coincidence-richest row
    let peak = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1[0].partial_cmp(&b.1 .1[0]).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let peak_counts = &scan.rows()[peak].counts;
    let (er_seed, et_seed) = transmissions_at_zero(peak_counts)
        .map_err(|_| CalibError::FitFailure("no coincidences anywhere in the scan".into()))?;

    let model_probs = |phi: Phase, v: f64, et: f64, er: f64| -> [f64; 3] {
        let q = ideal_unchecked(phi, v);
        lossy_unchecked(&q, et, er).normalized()
    };

    // stage 1: constant-parameter global fit of (v, eta_t, eta_r)
    let global_obj = |x: &[f64]| -> f64 {
        let (v, et, er) = (x[0], x[1], x[2]);
        if !(0.0..=1.0).contains(&v) || !(0.01..=1.0).contains(&et) || !(0.01..=1.0).contains(&er)
        {
            return 1e9;
        }
        rows.iter()
            .map(|(phi, p_hat, _)| {
                let p = model_probs(*phi, v, et, er);
                (0..3).map(|i| (p_hat[i] - p[i]).powi(2)).sum::<f64>()
            })
            .sum()
    };
    let seed = [
        vis.visibility.clamp(0.0, 1.0),
        et_seed.value.clamp(0.2, 1.0),
        er_seed.value.clamp(0.2, 1.0),
    ];
    let mut global = seed.to_vec();
    let mut evaluations = 0usize;
    let mut global_converged = false;
    let mut steps = [0.005, 0.01, 0.01];
    for _ in 0..3 {
        let nm = nelder_mead(&global_obj, &global, &steps, 1e-12, 1e-12, 40_000);
        evaluations += nm.evaluations;
        global_converged = nm.converged;
        global = nm.x;
        polish_axes(&global_obj, &mut global, &[steps[0], steps[1], steps[2]], 1e-12);
        for s in &mut steps {
            *s = (*s * 1e-2).max(1e-7);
        }
    }
    let (v_fit, et_global, er_global) = (global[0], global[1], global[2]);

    // stage 2: per-phase transmissions inside the variation box
    let box_for = |center: f64| -> (f64, f64) {
        (
            (center * (1.0 - VARIATION_CAP)).max(0.01),
            (center * (1.0 + VARIATION_CAP)).min(1.0),
        )
    };
    let (et_lo, et_hi) = box_for(et_global);
    let (er_lo, er_hi) = box_for(er_global);

    let mut phis = Vec::with_capacity(rows.len());
    let mut et_values = Vec::with_capacity(rows.len());
    let mut er_values = Vec::with_capacity(rows.len());
    let mut et_errs = Vec::with_capacity(rows.len());
    let mut er_errs = Vec::with_capacity(rows.len());
    let mut residual = 0.0;
    let mut clamped = 0usize;
    let mut all_converged = global_converged;

    for (phi, p_hat, k) in &rows {
        let obj = |x: &[f64]| -> f64 {
            let (et, er) = (x[0], x[1]);
            if !(et_lo..=et_hi).contains(&et) || !(er_lo..=er_hi).contains(&er) {
                return 1e9;
            }
            let p = model_probs(*phi, v_fit, et, er);
            (0..3).map(|i| (p_hat[i] - p[i]).powi(2)).sum()
        };
        let step = (VARIATION_CAP / 3.0) * et_global;
        let local = nelder_mead(obj, &[et_global, er_global], &[step, step], 1e-14, 1e-11, 20_000);
        let mut x = local.x.clone();
        let window = [
            step.min(x[0] - et_lo).min(et_hi - x[0]).max(1e-6),
            step.min(x[1] - er_lo).min(er_hi - x[1]).max(1e-6),
        ];
        polish_axes(obj, &mut x, &window, 1e-12);
        evaluations += local.evaluations;
        all_converged &= local.converged;

        let et = x[0].clamp(et_lo, et_hi);
        let er = x[1].clamp(er_lo, er_hi);
        let pinned = (et - et_lo).abs() < 1e-7
            || (et_hi - et).abs() < 1e-7
            || (er - er_lo).abs() < 1e-7
            || (er_hi - er).abs() < 1e-7;
        if pinned {
            clamped += 1;
        }
        residual += obj(&[et, er]);

        // sandwich covariance: J^T J conditioning widens the errors in
        // the poorly identified regions near the coincidence minima
        let h = 1e-6;
        let mut jac = [[0.0f64; 2]; 3];
        for col in 0..2 {
            let mut plus = [et, er];
            let mut minus = [et, er];
            plus[col] += h;
            minus[col] -= h;
            let pp = model_probs(*phi, v_fit, plus[0], plus[1]);
            let pm = model_probs(*phi, v_fit, minus[0], minus[1]);
            for i in 0..3 {
                jac[i][col] = (pp[i] - pm[i]) / (2.0 * h);
            }
        }
        let sigma_p: Vec<f64> = p_hat
            .iter()
            .map(|p| (p * (1.0 - p) / k).max(1e-18))
            .collect();
        let (s_et, s_er) = sandwich_errors(&jac, &sigma_p);

        phis.push(phi.radians());
        et_values.push(et);
        er_values.push(er);
        et_errs.push(s_et.min(0.5));
        er_errs.push(s_er.min(0.5));
    }

    let eta_t = TransmissionProfile::tabulated(phis.clone(), et_values)?;
    let eta_r = TransmissionProfile::tabulated(phis, er_values)?;
    let variation = (eta_t.max_value() / eta_t.min_value() - 1.0)
        .max(eta_r.max_value() / eta_r.min_value() - 1.0);

    let model = InterferometerModel::new(v_fit.clamp(0.0, 1.0), eta_t, eta_r, 0.0, 0.0)?;
    Ok(CalibrationCurves {
        model,
        visibility_err: vis.std_err,
        eta_t_err: et_errs,
        eta_r_err: er_errs,
        xi_err: 0.0,
        fit: FitMetadata {
            residual_sum_squares: residual,
            converged: all_converged && vis.offset_ok,
            phase_offset: vis.phase_offset,
            baseline: vis.baseline,
            evaluations,
            max_transmission_variation: variation,
            clamped_phases: clamped,
        },
    })
}

/// Recovered double-pair fraction with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEstimate {
    pub xi: f64,
    pub std_err: f64,
    /// Inferred per-pulse single-pair emission probability.
    pub pair_prob: f64,
    /// True when the root was pinned at a search boundary.
    pub clamped: bool,
}

/// Estimate the double-pair emission fraction by comparing detection
/// totals and coincidences against the pulse count.
///
/// The per-pulse detection rate fixes the single-pair probability for a
/// candidate xi ("with loss taken into account"), and the coincidence
/// rate at the same phase then pins xi by one-dimensional root finding:
/// double pairs inflate coincidences far above the single-pair floor at
/// the fringe minimum, so phases near pi/2 give the most sensitivity.
pub fn estimate_xi(
    counts: &EventCounts,
    curves: &CalibrationCurves,
    phi: Phase,
) -> Result<XiEstimate, CalibError> {
    if counts.pulses == 0 {
        return Err(CalibError::FitFailure("no pulses in the window".into()));
    }
    if counts.recorded() == 0 {
        return Err(CalibError::FitFailure("no detection events".into()));
    }
    let pulses = counts.pulses as f64;
    let rate = counts.recorded() as f64 / pulses;
    if rate >= 0.5 {
        return Err(CalibError::Saturated(rate));
    }
    let mu_c = counts.c11 as f64 / pulses;

    let (xi, clamped, pair_prob) = solve_xi(&curves.model, phi, rate, mu_c);

    // statistical part: multinomial noise on coincidence and total rates
    let d_mu = (mu_c * 1e-3).max(1e-15);
    let g_mu = (solve_xi(&curves.model, phi, rate, mu_c + d_mu).0
        - solve_xi(&curves.model, phi, rate, mu_c - d_mu).0)
        / (2.0 * d_mu);
    let d_r = (rate * 1e-3).max(1e-15);
    let g_r = (solve_xi(&curves.model, phi, rate + d_r, mu_c).0
        - solve_xi(&curves.model, phi, rate - d_r, mu_c).0)
        / (2.0 * d_r);
    let var_mu = mu_c * (1.0 - mu_c) / pulses;
    let var_r = rate * (1.0 - rate) / pulses;
    let cov = mu_c * (1.0 - rate) / pulses;
    let var_stat = (g_mu * g_mu * var_mu + g_r * g_r * var_r + 2.0 * g_mu * g_r * cov).max(0.0);

    // systematic part: calibration parameters perturbed by +-1 sigma
    let mut var_par = 0.0;
    let m = &curves.model;
    let mut perturb = |plus: Option<InterferometerModel>, minus: Option<InterferometerModel>| {
        if let (Some(p), Some(q)) = (plus, minus) {
            let d = (solve_xi(&p, phi, rate, mu_c).0 - solve_xi(&q, phi, rate, mu_c).0) / 2.0;
            var_par += d * d;
        }
    };
    perturb(
        rebuild_with_visibility(m, m.visibility() + curves.visibility_err),
        rebuild_with_visibility(m, m.visibility() - curves.visibility_err),
    );
    let et_err = curves.eta_t_err_at(phi);
    perturb(
        rebuild_with_shifted_eta(m, et_err, 0.0),
        rebuild_with_shifted_eta(m, -et_err, 0.0),
    );
    let er_err = curves.eta_r_err_at(phi);
    perturb(
        rebuild_with_shifted_eta(m, 0.0, er_err),
        rebuild_with_shifted_eta(m, 0.0, -er_err),
    );

    Ok(XiEstimate {
        xi,
        std_err: (var_stat + var_par).sqrt(),
        pair_prob,
        clamped,
    })
}

/// Root-solve the coincidence-excess equation for xi at fixed observed
/// detection and coincidence rates. Returns (xi, clamped, pair_prob).
fn solve_xi(model: &InterferometerModel, phi: Phase, rate: f64, mu_c: f64) -> (f64, bool, f64) {
    let r = recorded_probs(model, phi);
    let a_t = r.p11_pair + r.p20_pair;
    let a_r = r.p11_pair + r.p02_pair;
    let a_c = r.p11_pair;
    let a_0 = r.p_none;
    let beta1 = 1.0 - a_0;
    let beta2 = 1.0 - a_0 * a_0;
    let b_c = 1.0 - (1.0 - a_t).powi(2) - (1.0 - a_r).powi(2) + a_0 * a_0;

    let pair_for = |xi: f64| rate / (beta1 + xi * beta2);
    // predicted-minus-observed coincidence rate; increasing in xi
    let h = |xi: f64| pair_for(xi) * (a_c + xi * b_c) - mu_c;

    if h(0.0) >= 0.0 {
        return (0.0, true, pair_for(0.0));
    }
    if h(XI_SEARCH_MAX) <= 0.0 {
        return (XI_SEARCH_MAX, true, pair_for(XI_SEARCH_MAX));
    }
    let (mut lo, mut hi) = (0.0f64, XI_SEARCH_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xi = 0.5 * (lo + hi);
    (xi, false, pair_for(xi))
}

pub(crate) fn rebuild_with_visibility(
    m: &InterferometerModel,
    v: f64,
) -> Option<InterferometerModel> {
    InterferometerModel::new(
        v.clamp(0.0, 1.0),
        m.eta_t().clone(),
        m.eta_r().clone(),
        m.xi(),
        m.dark_prob(),
    )
    .ok()
}

pub(crate) fn rebuild_with_shifted_eta(
    m: &InterferometerModel,
    dt: f64,
    dr: f64,
) -> Option<InterferometerModel> {
    let shift = |p: &TransmissionProfile, d: f64| -> Option<TransmissionProfile> {
        match p {
            TransmissionProfile::Constant(eta) => {
                TransmissionProfile::constant((eta + d).clamp(1e-6, 1.0)).ok()
            }
            TransmissionProfile::Tabulated { phis, values } => TransmissionProfile::tabulated(
                phis.clone(),
                values.iter().map(|v| (v + d).clamp(1e-6, 1.0)).collect(),
            )
            .ok(),
        }
    };
    InterferometerModel::new(
        m.visibility(),
        shift(m.eta_t(), dt)?,
        shift(m.eta_r(), dr)?,
        m.xi(),
        m.dark_prob(),
    )
    .ok()
}

// serialized calibration document

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    phis: Vec<f64>,
    values: Vec<f64>,
    errs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OffsetsDoc {
    phase: f64,
    baseline: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitDoc {
    residual: f64,
    converged: bool,
    offsets: OffsetsDoc,
    evaluations: u64,
    max_transmission_variation: f64,
    clamped_phases: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationDoc {
    format_version: u32,
    visibility: f64,
    visibility_err: f64,
    eta_t: ProfileDoc,
    eta_r: ProfileDoc,
    xi: f64,
    xi_err: f64,
    fit: FitDoc,
}

const CALIBRATION_FORMAT_VERSION: u32 = 1;

impl CalibrationDoc {
    fn from_curves(curves: &CalibrationCurves) -> Self {
        let profile_doc = |p: &TransmissionProfile, errs: &[f64]| match p {
            TransmissionProfile::Constant(eta) => ProfileDoc {
                phis: vec![0.0],
                values: vec![*eta],
                errs: vec![errs.first().copied().unwrap_or(0.0)],
            },
            TransmissionProfile::Tabulated { phis, values } => ProfileDoc {
                phis: phis.clone(),
                values: values.clone(),
                errs: errs.to_vec(),
            },
        };
        Self {
            format_version: CALIBRATION_FORMAT_VERSION,
            visibility: curves.model.visibility(),
            visibility_err: curves.visibility_err,
            eta_t: profile_doc(curves.model.eta_t(), &curves.eta_t_err),
            eta_r: profile_doc(curves.model.eta_r(), &curves.eta_r_err),
            xi: curves.model.xi(),
            xi_err: curves.xi_err,
            fit: FitDoc {
                residual: curves.fit.residual_sum_squares,
                converged: curves.fit.converged,
                offsets: OffsetsDoc {
                    phase: curves.fit.phase_offset,
                    baseline: curves.fit.baseline,
                },
                evaluations: curves.fit.evaluations as u64,
                max_transmission_variation: curves.fit.max_transmission_variation,
                clamped_phases: curves.fit.clamped_phases as u64,
            },
        }
    }

    fn into_curves(self) -> Result<CalibrationCurves, CalibError> {
        if self.format_version != CALIBRATION_FORMAT_VERSION {
            return Err(CalibError::Io(format!(
                "unsupported calibration format version {}",
                self.format_version
            )));
        }
        let profile = |doc: &ProfileDoc| -> Result<(TransmissionProfile, Vec<f64>), CalibError> {
            if doc.errs.len() != doc.values.len() {
                return Err(CalibError::Io("mismatched err/value arrays".into()));
            }
            Ok((
                TransmissionProfile::tabulated(doc.phis.clone(), doc.values.clone())?,
                doc.errs.clone(),
            ))
        };
        let (eta_t, eta_t_err) = profile(&self.eta_t)?;
        let (eta_r, eta_r_err) = profile(&self.eta_r)?;
        let model = InterferometerModel::new(self.visibility, eta_t, eta_r, self.xi, 0.0)?;
        Ok(CalibrationCurves {
            model,
            visibility_err: self.visibility_err,
            eta_t_err,
            eta_r_err,
            xi_err: self.xi_err,
            fit: FitMetadata {
                residual_sum_squares: self.fit.residual,
                converged: self.fit.converged,
                phase_offset: self.fit.offsets.phase,
                baseline: self.fit.offsets.baseline,
                evaluations: self.fit.evaluations as usize,
                max_transmission_variation: self.fit.max_transmission_variation,
                clamped_phases: self.fit.clamped_phases as usize,
            },
        })
    }
}

// small dense linear algebra used by the fitters

fn inv3(a: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let mut m = *a;
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let d = m[col][col];
        for j in 0..3 {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..3 {
            if i != col {
                let f = m[i][col];
                for j in 0..3 {
                    m[i][j] -= f * m[col][j];
                    inv[i][j] -= f * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

fn mat3_mul_vec(a: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

/// Standard errors of a 2-parameter least-squares solution with 3
/// observations of variances `sigma_p`, via the sandwich estimator
/// (J^T J)^-1 J^T S J (J^T J)^-1.
fn sandwich_errors(jac: &[[f64; 2]; 3], sigma_p: &[f64]) -> (f64, f64) {
    let mut jtj = [[0.0f64; 2]; 2];
    for row in jac {
        for i in 0..2 {
            for j in 0..2 {
                jtj[i][j] += row[i] * row[j];
            }
        }
    }
    let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
    if det.abs() < 1e-20 {
        return (0.5, 0.5);
    }
    let inv = [
        [jtj[1][1] / det, -jtj[0][1] / det],
        [-jtj[1][0] / det, jtj[0][0] / det],
    ];
    // M = inv * J^T * S * J * inv
    let mut jtsj = [[0.0f64; 2]; 2];
    for (r, row) in jac.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                jtsj[i][j] += row[i] * sigma_p[r] * row[j];
            }
        }
    }
    let mut mid = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                mid[i][j] += inv[i][k] * jtsj[k][j];
            }
        }
    }
    let mut cov = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                cov[i][j] += mid[i][k] * inv[k][j];
            }
        }
    }
    (cov[0][0].max(0.0).sqrt(), cov[1][1].max(0.0).sqrt())
}
