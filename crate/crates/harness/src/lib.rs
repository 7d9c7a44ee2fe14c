//! Monte-Carlo experiments for the `opbound` bounds: a commuting-matrix
//! covariance study and a kernel covariance study in an RBF feature space.
//!
//! Each trial draws its own seeded stream, so results are bit-identical for a
//! given configuration regardless of thread scheduling.

pub mod config;
pub mod error;
pub mod experiment;
pub mod record;
pub mod sampling;

pub use config::{ExperimentConfig, ExperimentKind, FileConfig, Profile, Workload};
pub use error::{HarnessError, Result};
pub use experiment::{
    covariance_trial, kernel_trial, run_covariance_experiment, run_experiment, run_experiment_with,
    run_kernel_experiment, TrialOutcome,
};
pub use record::{read_csv, write_csv, CsvSink, TrialRecord, CSV_HEADER, SCHEMA_VERSION};
pub use sampling::{sample_covariance_batch, sample_diagonal_batch, trial_seed};
