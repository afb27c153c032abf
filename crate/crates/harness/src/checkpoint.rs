//! Checkpoint files: the agent snapshot (parameters, optimizer state, noise
//! schedule) together with the resolved experiment config and its hash.
//!
//! Format: a single JSON document, `{ format, config_hash, seed, config,
//! agent }`. Parameter tensors appear as flat row-major arrays under each
//! network's layer list, so any tooling can reconstruct shapes from the
//! adjacent spec.

use std::path::Path;

use serde::{Deserialize, Serialize};

use swarmbeam_core::gdmtd3::{AgentSnapshot, GdmTd3};

use crate::config::ExperimentConfig;
use crate::HarnessError;

const FORMAT_TAG: &str = "swarmbeam-checkpoint-v1";

#[derive(Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    /// Hash of the resolved experiment config the agent was trained under.
    pub config_hash: String,
    /// Training seed of this run.
    pub seed: u64,
    pub config: ExperimentConfig,
    pub agent: AgentSnapshot,
}

pub fn save(
    path: &Path,
    config: &ExperimentConfig,
    seed: u64,
    agent: &GdmTd3,
) -> Result<(), HarnessError> {
    let checkpoint = Checkpoint {
        format: FORMAT_TAG.to_string(),
        config_hash: config.hash()?,
        seed,
        config: config.clone(),
        agent: agent.snapshot(),
    };
    let json = serde_json::to_string(&checkpoint)
        .map_err(|e| HarnessError::Runtime(format!("checkpoint serialization failed: {e}")))?;
    std::fs::write(path, json)
        .map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Loads and integrity-checks a checkpoint: the format tag must match and
/// the stored hash must equal the hash of the stored config.
pub fn load(path: &Path) -> Result<Checkpoint, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let checkpoint: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| HarnessError::Runtime(format!("{} is not a valid checkpoint: {e}", path.display())))?;
    if checkpoint.format != FORMAT_TAG {
        return Err(HarnessError::Runtime(format!(
            "{} has format '{}', expected '{FORMAT_TAG}'",
            path.display(),
            checkpoint.format
        )));
    }
    let expected = checkpoint.config.hash()?;
    if checkpoint.config_hash != expected {
        return Err(HarnessError::Runtime(format!(
            "{} fails its integrity check: stored config hash {} != recomputed {expected}",
            path.display(),
            checkpoint.config_hash
        )));
    }
    Ok(checkpoint)
}
