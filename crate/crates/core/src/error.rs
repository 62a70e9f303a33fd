//! Error types, one enum per subsystem.

use thiserror::Error;

/// Domain violations in the interferometer model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("visibility {0} outside [0, 1]")]
    Visibility(f64),
    #[error("efficiency {0} outside (0, 1]")]
    Efficiency(f64),
    #[error("double-pair fraction {0} outside [0, 0.1]")]
    MultiPairFraction(f64),
    #[error("dark-count probability {0} outside [0, 1e-3]")]
    DarkProb(f64),
    #[error("phase must be finite, got {0}")]
    NonFinitePhase(f64),
    #[error("invalid transmission profile: {0}")]
    Profile(String),
    #[error("invalid outcome distribution: {0}")]
    Distribution(String),
}

/// Failures while generating synthetic detection data.
#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("pair probability {0} outside [0, 1]")]
    PairProb(f64),
    #[error("emission probability pair_prob*(1+xi) = {0} exceeds 1")]
    EmissionRate(f64),
    #[error("repetition rate {0} must be positive and finite")]
    RepRate(f64),
    #[error(
        "pulse guard limit of {limit} pulses exceeded with {recorded} of {requested} recorded trials"
    )]
    GuardLimit {
        limit: u64,
        recorded: u64,
        requested: u64,
    },
    #[error("requested zero recorded trials")]
    ZeroTrials,
    #[error("scan phases must be strictly increasing within [0, 2*pi)")]
    ScanPhases,
    #[error("empty phase list")]
    EmptyPhases,
    #[error("inconsistent scan row: {0}")]
    InconsistentRow(String),
    #[error("scan i/o: {0}")]
    Io(String),
}

/// Failures while recovering model parameters from scan data.
#[derive(Debug, Error)]
pub enum CalibError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no coincidences at the reference phase; calibration at a fringe minimum is invalid")]
    NoCoincidences,
    #[error("scan must cover a full fringe period with at least {min} phases, got {got}")]
    InsufficientCoverage { min: usize, got: usize },
    #[error("fit failed: {0}")]
    FitFailure(String),
    #[error("fitted visibility {v} exceeds 1 by more than 3 sigma (sigma = {sigma})")]
    VisibilityOutOfRange { v: f64, sigma: f64 },
    #[error("detection rate {0} per pulse is saturated (>= 0.5)")]
    Saturated(f64),
    #[error("calibration i/o: {0}")]
    Io(String),
}

/// Failures in Fisher-information analysis and phase estimation.
#[derive(Debug, Error)]
pub enum EstimateError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    InvalidInput(String),
    #[error("estimation i/o: {0}")]
    Io(String),
}
