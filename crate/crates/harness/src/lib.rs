//! Experiment registry, result documents and acceptance checks for the
//! `aheft` tool.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod result;
pub mod verify;

pub use config::{ExperimentConfig, ExperimentId, Scale};
pub use error::HarnessError;
pub use experiments::{run_experiment, run_experiment_with_workers, write_result};
pub use result::ExperimentResult;
