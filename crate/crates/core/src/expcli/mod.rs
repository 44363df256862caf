//! Experiment harness behind the command-line tool: configuration, the three
//! desk-scale experiments (detection, sample complexity, drift calibration)
//! and JSON/CSV run artifacts.

mod config;
mod detection;
mod drift;
mod report;
mod sample;

pub use config::{ExperimentConfig, ExperimentKind};
pub use detection::experiment_detection;
pub use drift::{construct_drift_schedule, experiment_drift, interval_from_artifact, DriftSchedule, DRIFT_TOL};
pub use report::{
    emit_report, CountsRecord, NamedDeviation, NamedFingerprint, ReportFormat, RunArtifact, Table,
    VerdictRecord, SCHEMA_VERSION,
};
pub use sample::{experiment_sample_complexity, rate_rows, RateRow};

use crate::channels::ChannelKind;
use crate::contract::MeasurementMode;
use crate::Result;

/// Exact or shot-based measurement of `kind` under the configured noise.
pub(crate) fn measurement_mode(cfg: &ExperimentConfig, kind: &ChannelKind, shots: u64) -> MeasurementMode {
    if cfg.exact {
        MeasurementMode::Exact
    } else {
        MeasurementMode::Shots {
            shots,
            noise: kind.effective_noise(&cfg.noise),
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    match cfg.experiment {
        ExperimentKind::Detection => experiment_detection(cfg),
        ExperimentKind::Sample => experiment_sample_complexity(cfg),
        ExperimentKind::Drift => experiment_drift(cfg),
    }
}
