//! Simulation and statistical-estimation toolkit for two-photon
//! NOON-state interferometry.
//!
//! The crate models a lossy polarization interferometer probed by
//! photon pairs ([`model`]), generates seeded detection statistics per
//! laser pulse ([`sim`]), recovers model parameters from fringe scans
//! ([`calib`]), and quantifies phase sensitivity against the
//! loss-adjusted shot-noise limit via Fisher information and
//! repeated-sample estimation with bootstrap errors ([`estimate`]).

pub mod calib;
pub mod error;
pub mod estimate;
pub mod model;
mod optim;
pub mod sim;

pub use calib::{
    estimate_xi, fit_model, fit_visibility, transmissions_at_zero, CalibrationCurves,
    FitMetadata, TransmissionEstimate, VisibilityFit, XiEstimate,
};
pub use error::{CalibError, EstimateError, ModelError, SimError};
pub use estimate::{
    aggregate_samples, bootstrap_sem, estimate_phase, estimate_phase_from_probs, fisher_curve,
    fisher_information, run_phase_samples, snl_adjusted, snl_sem, BatchDocument, BootstrapSem,
    FisherCurve, PhaseEstimate, PhaseEstimateBatch, ResourceAccount, SampleStats,
};
pub use model::{
    eta_min, ideal_outcome_probs, lossy_event_probs, outcome_efficiencies, recorded_probs,
    resch_criterion, InterferometerModel, OutcomeDistribution, OutcomeEfficiencies, Phase,
    RecordedDistribution, TransmissionProfile, PHOTON_NUMBER,
};
pub use sim::{
    simulate_pulse, simulate_scan, simulate_trials, simulate_trials_with_stream, EventClass,
    EventCounts, FringeScan, ScanRow, SourceConfig, RNG_ALGORITHM,
};
