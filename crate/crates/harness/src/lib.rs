//! Harness library: configuration, metrics, checkpoints, and experiment
//! orchestration behind the `swarmbeam` CLI.

pub mod checkpoint;
pub mod config;
pub mod metrics;
pub mod runner;

use thiserror::Error;

/// Exit code 2.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code 3.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => EXIT_CONFIG,
            HarnessError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<swarmbeam_core::env::EnvError> for HarnessError {
    fn from(e: swarmbeam_core::env::EnvError) -> Self {
        match e {
            swarmbeam_core::env::EnvError::Config(_) | swarmbeam_core::env::EnvError::Placement { .. } => {
                HarnessError::Config(e.to_string())
            }
            other => HarnessError::Runtime(other.to_string()),
        }
    }
}

impl From<swarmbeam_core::gdmtd3::TrainError> for HarnessError {
    fn from(e: swarmbeam_core::gdmtd3::TrainError) -> Self {
        match e {
            swarmbeam_core::gdmtd3::TrainError::Config(_)
            | swarmbeam_core::gdmtd3::TrainError::Schedule(_) => HarnessError::Config(e.to_string()),
            other => HarnessError::Runtime(other.to_string()),
        }
    }
}
