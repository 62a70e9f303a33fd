//! Analytic model of the lossy N = 2 NOON polarization interferometer.
//!
//! Probabilities flow in two steps: [`ideal_outcome_probs`] gives the
//! pre-loss two-photon outcome distribution at a phase, and
//! [`lossy_event_probs`] propagates it through independent per-photon
//! Bernoulli loss to the event classes recorded by a pair of
//! non-number-resolving detectors. Everything here is a pure function of
//! immutable inputs.

use crate::error::ModelError;
use std::f64::consts::PI;

/// Photons per trial; the model is fixed to two-photon states.
pub const PHOTON_NUMBER: u32 = 2;

/// Tolerance for probability normalization identities.
pub const PROB_TOL: f64 = 1e-12;

/// Largest admissible double-pair fraction.
pub const MAX_XI: f64 = 0.1;

/// Largest admissible per-pulse, per-detector dark-count probability.
pub const MAX_DARK_PROB: f64 = 1e-3;

/// Largest admissible max/min ratio of an angle-dependent transmission.
pub const MAX_PROFILE_VARIATION: f64 = 1.02;

/// Interferometric phase in radians.
///
/// The two-photon fringe has period pi, so phases differing by pi give
/// identical probabilities whenever the transmissions are constant.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Phase(f64);

impl Phase {
    pub fn new(radians: f64) -> Result<Self, ModelError> {
        if radians.is_finite() {
            Ok(Phase(radians))
        } else {
            Err(ModelError::NonFinitePhase(radians))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Reduce to the canonical fringe period [0, pi).
    pub fn canonical(self) -> Self {
        Phase(self.0.rem_euclid(PI))
    }

    /// Reduce to the full wave-plate rotation period [0, 2*pi).
    pub fn wrapped(self) -> Self {
        Phase(self.0.rem_euclid(2.0 * PI))
    }
}

fn check_visibility(v: f64) -> Result<(), ModelError> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ModelError::Visibility(v))
    }
}

fn check_efficiency(eta: f64) -> Result<(), ModelError> {
    if eta.is_finite() && eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(ModelError::Efficiency(eta))
    }
}

/// Arm efficiency, either constant or tabulated against phase.
///
/// Tabulated profiles interpolate linearly between grid points and wrap
/// around modulo 2*pi, matching a wave-plate rotation period.
#[derive(Debug, Clone, PartialEq)]
pub enum TransmissionProfile {
    Constant(f64),
    Tabulated { phis: Vec<f64>, values: Vec<f64> },
}

impl TransmissionProfile {
    pub fn constant(eta: f64) -> Result<Self, ModelError> {
        check_efficiency(eta)?;
        Ok(Self::Constant(eta))
    }

    pub fn tabulated(phis: Vec<f64>, values: Vec<f64>) -> Result<Self, ModelError> {
        if phis.is_empty() || phis.len() != values.len() {
            return Err(ModelError::Profile(
                "grid and value arrays must be non-empty and of equal length".into(),
            ));
        }
        for &p in &phis {
            if !p.is_finite() || !(0.0..2.0 * PI).contains(&p) {
                return Err(ModelError::Profile(format!(
                    "grid phase {p} outside [0, 2*pi)"
                )));
            }
        }
        if phis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::Profile(
                "grid phases must be strictly increasing".into(),
            ));
        }
        for &v in &values {
            check_efficiency(v)?;
        }
        if values.len() == 1 {
            return Ok(Self::Constant(values[0]));
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(0.0_f64, f64::max);
        if hi / lo > MAX_PROFILE_VARIATION + 1e-12 {
            return Err(ModelError::Profile(format!(
                "max/min variation {:.6} exceeds {MAX_PROFILE_VARIATION}",
                hi / lo
            )));
        }
        Ok(Self::Tabulated { phis, values })
    }

    /// Efficiency at the given phase.
    pub fn at(&self, phi: Phase) -> f64 {
        match self {
            Self::Constant(eta) => *eta,
            Self::Tabulated { phis, values } => {
                let x = phi.wrapped().radians();
                let n = phis.len();
                // index of the first grid point above x
                let hi = phis.partition_point(|&p| p <= x);
                let (x0, y0, x1, y1) = if hi == 0 {
                    // left of the first point: wrap the last segment down
                    (phis[n - 1] - 2.0 * PI, values[n - 1], phis[0], values[0])
                } else if hi == n {
                    (phis[n - 1], values[n - 1], phis[0] + 2.0 * PI, values[0])
                } else {
                    (phis[hi - 1], values[hi - 1], phis[hi], values[hi])
                };
                let t = (x - x0) / (x1 - x0);
                y0 + t * (y1 - y0)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }

    pub fn min_value(&self) -> f64 {
        match self {
            Self::Constant(eta) => *eta,
            Self::Tabulated { values, .. } => {
                values.iter().cloned().fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn max_value(&self) -> f64 {
        match self {
            Self::Constant(eta) => *eta,
            Self::Tabulated { values, .. } => values.iter().cloned().fold(0.0, f64::max),
        }
    }
}

/// Full parameter set of the experiment: fringe visibility, per-arm
/// transmissions, double-pair fraction, and dark-count probability.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerModel {
    visibility: f64,
    eta_t: TransmissionProfile,
    eta_r: TransmissionProfile,
    xi: f64,
    dark_prob: f64,
}

impl InterferometerModel {
    pub fn new(
        visibility: f64,
        eta_t: TransmissionProfile,
        eta_r: TransmissionProfile,
        xi: f64,
        dark_prob: f64,
    ) -> Result<Self, ModelError> {
        check_visibility(visibility)?;
        if !xi.is_finite() || !(0.0..=MAX_XI).contains(&xi) {
            return Err(ModelError::MultiPairFraction(xi));
        }
        if !dark_prob.is_finite() || !(0.0..=MAX_DARK_PROB).contains(&dark_prob) {
            return Err(ModelError::DarkProb(dark_prob));
        }
        Ok(Self {
            visibility,
            eta_t,
            eta_r,
            xi,
            dark_prob,
        })
    }

    /// Constructor for phase-independent transmissions.
    pub fn with_constant_eta(
        visibility: f64,
        eta_t: f64,
        eta_r: f64,
        xi: f64,
        dark_prob: f64,
    ) -> Result<Self, ModelError> {
        Self::new(
            visibility,
            TransmissionProfile::constant(eta_t)?,
            TransmissionProfile::constant(eta_r)?,
            xi,
            dark_prob,
        )
    }

    /// Lossless unit-visibility reference model.
    pub fn ideal() -> Self {
        Self::with_constant_eta(1.0, 1.0, 1.0, 0.0, 0.0).expect("ideal parameters are valid")
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn eta_t(&self) -> &TransmissionProfile {
        &self.eta_t
    }

    pub fn eta_r(&self) -> &TransmissionProfile {
        &self.eta_r
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn dark_prob(&self) -> f64 {
        self.dark_prob
    }

    pub fn photon_number(&self) -> u32 {
        PHOTON_NUMBER
    }

    pub fn has_constant_eta(&self) -> bool {
        self.eta_t.is_constant() && self.eta_r.is_constant()
    }
}

/// Pre-loss two-photon outcome probabilities at a phase: one photon per
/// output (`q11`), both transmitted (`q20`), both reflected (`q02`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution {
    pub q11: f64,
    pub q20: f64,
    pub q02: f64,
}

impl OutcomeDistribution {
    pub fn new(q11: f64, q20: f64, q02: f64) -> Result<Self, ModelError> {
        let d = Self { q11, q20, q02 };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for q in [self.q11, self.q20, self.q02] {
            if !q.is_finite() || !(0.0..=1.0).contains(&q) {
                return Err(ModelError::Distribution(format!(
                    "component {q} outside [0, 1]"
                )));
            }
        }
        let sum = self.q11 + self.q20 + self.q02;
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(ModelError::Distribution(format!("sum {sum} != 1")));
        }
        if self.q20 != self.q02 {
            return Err(ModelError::Distribution(
                "splitter symmetry requires q20 == q02".into(),
            ));
        }
        Ok(())
    }
}

/// Per-generated-pair probabilities of each recorded event class
/// (`p11_pair`, `p20_pair`, `p02_pair`, `p_none`), together with the
/// renormalized per-recorded-trial probabilities (`p11`, `p20`, `p02`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordedDistribution {
    pub p11_pair: f64,
    pub p20_pair: f64,
    pub p02_pair: f64,
    pub p_none: f64,
    pub p11: f64,
    pub p20: f64,
    pub p02: f64,
}

impl RecordedDistribution {
    /// Normalized recorded probabilities in class order 11, 20, 02.
    pub fn normalized(&self) -> [f64; 3] {
        [self.p11, self.p20, self.p02]
    }

    /// Probability that a generated pair produces at least one click.
    pub fn detection_prob(&self) -> f64 {
        1.0 - self.p_none
    }
}

/// Probability that each two-photon outcome class yields at least one
/// detector click.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeEfficiencies {
    pub eta11: f64,
    pub eta20: f64,
    pub eta02: f64,
}

impl OutcomeEfficiencies {
    pub fn min(&self) -> f64 {
        self.eta11.min(self.eta20).min(self.eta02)
    }
}

/// Ideal (pre-loss) two-photon outcome probabilities:
/// q11 = (1 + v cos 2phi)/2 and q20 = q02 = (1 - v cos 2phi)/4, with
/// coincidences maximal at phi = 0.
pub fn ideal_outcome_probs(phi: Phase, visibility: f64) -> Result<OutcomeDistribution, ModelError> {
    check_visibility(visibility)?;
    Ok(ideal_unchecked(phi, visibility))
}

pub(crate) fn ideal_unchecked(phi: Phase, visibility: f64) -> OutcomeDistribution {
    let fringe = visibility * (2.0 * phi.radians()).cos();
    OutcomeDistribution {
        q11: (1.0 + fringe) / 2.0,
        q20: (1.0 - fringe) / 4.0,
        q02: (1.0 - fringe) / 4.0,
    }
}

/// Propagate an outcome distribution through independent per-photon
/// Bernoulli loss with arm transmissions `eta_t` and `eta_r`.
pub fn lossy_event_probs(
    q: &OutcomeDistribution,
    eta_t: f64,
    eta_r: f64,
) -> Result<RecordedDistribution, ModelError> {
    q.validate()?;
    check_efficiency(eta_t)?;
    check_efficiency(eta_r)?;
    Ok(lossy_unchecked(q, eta_t, eta_r))
}

pub(crate) fn lossy_unchecked(
    q: &OutcomeDistribution,
    eta_t: f64,
    eta_r: f64,
) -> RecordedDistribution {
    let lt = 1.0 - eta_t;
    let lr = 1.0 - eta_r;
    let p11_pair = q.q11 * eta_t * eta_r;
    let p20_pair = q.q20 * (1.0 - lt * lt) + q.q11 * eta_t * lr;
    let p02_pair = q.q02 * (1.0 - lr * lr) + q.q11 * eta_r * lt;
    let p_none = q.q11 * lt * lr + q.q20 * lt * lt + q.q02 * lr * lr;
    // p_none < 1 because eta > 0 and the q's sum to one
    let d = 1.0 - p_none;
    RecordedDistribution {
        p11_pair,
        p20_pair,
        p02_pair,
        p_none,
        p11: p11_pair / d,
        p20: p20_pair / d,
        p02: p02_pair / d,
    }
}

/// Recorded event-class probabilities for a model at a phase: the ideal
/// fringe propagated through the model's transmissions at `phi`.
///
/// Dark counts and double pairs do not enter here; they exist only in
/// the stochastic simulator.
pub fn recorded_probs(model: &InterferometerModel, phi: Phase) -> RecordedDistribution {
    let q = ideal_unchecked(phi, model.visibility);
    lossy_unchecked(&q, model.eta_t.at(phi), model.eta_r.at(phi))
}

/// Probability that each outcome class produces at least one click:
/// eta11 = 1-(1-eta_t)(1-eta_r), eta20 = 1-(1-eta_t)^2,
/// eta02 = 1-(1-eta_r)^2.
pub fn outcome_efficiencies(eta_t: f64, eta_r: f64) -> Result<OutcomeEfficiencies, ModelError> {
    check_efficiency(eta_t)?;
    check_efficiency(eta_r)?;
    let lt = 1.0 - eta_t;
    let lr = 1.0 - eta_r;
    Ok(OutcomeEfficiencies {
        eta11: 1.0 - lt * lr,
        eta20: 1.0 - lt * lt,
        eta02: 1.0 - lr * lr,
    })
}

/// Lowest outcome efficiency of the model at `phi`.
pub fn eta_min(model: &InterferometerModel, phi: Phase) -> f64 {
    outcome_efficiencies(model.eta_t.at(phi), model.eta_r.at(phi))
        .expect("model transmissions are validated")
        .min()
}

/// Super-sensitivity figure of merit eta^N * v^2 * N. Values above 1
/// indicate that visibility and transmission leave room for a genuine
/// quantum advantage.
pub fn resch_criterion(eta: f64, visibility: f64, photons: u32) -> f64 {
    eta.powi(photons as i32) * visibility * visibility * f64::from(photons)
}
