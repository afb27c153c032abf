//! Experiment configuration: TOML files, dotted CLI overrides, validation,
//! and the canonical config hash stored in manifests and checkpoints.

use serde::{Deserialize, Serialize};

use swarmbeam_core::env::EnvConfig;
use swarmbeam_core::gdmtd3::AgentConfig;

use crate::HarnessError;

/// Canonical defaults shipped with the binary; `--config` starts from this
/// unless a file is given.
pub const DEFAULTS_TOML: &str = include_str!("../defaults.toml");

/// A full experiment: environment, agent, seeds and labelling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Run label; used as the output subdirectory name.
    pub run_label: String,
    /// One full training/evaluation run per seed.
    pub seeds: Vec<u64>,
    pub env: EnvConfig,
    pub agent: AgentConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            run_label: String::from("run"),
            seeds: vec![0],
            env: EnvConfig::default(),
            agent: AgentConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.seeds.is_empty() {
            return Err(HarnessError::Config("seed list must not be empty".into()));
        }
        if self.run_label.is_empty()
            || !self
                .run_label
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '='))
        {
            return Err(HarnessError::Config(format!(
                "run label '{}' must be non-empty and filesystem-safe",
                self.run_label
            )));
        }
        self.env.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        self.agent.validate().map_err(HarnessError::Config)?;
        Ok(())
    }

    /// Canonical TOML serialization; hashing and storage both use this form.
    pub fn to_canonical_toml(&self) -> Result<String, HarnessError> {
        toml::to_string_pretty(self).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// FNV-1a hash of the canonical serialization, as fixed-width hex.
    pub fn hash(&self) -> Result<String, HarnessError> {
        Ok(fnv1a_hex(self.to_canonical_toml()?.as_bytes()))
    }
}

pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

/// One `key.path=value` override from the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct Override {
    pub path: Vec<String>,
    pub value: toml::Value,
    pub raw: String,
}

impl std::str::FromStr for Override {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| format!("override '{s}' must look like key.path=value"))?;
        let path: Vec<String> = key.trim().split('.').map(|p| p.trim().to_string()).collect();
        if path.is_empty() || path.iter().any(|p| p.is_empty()) {
            return Err(format!("override '{s}' has an empty key segment"));
        }
        // Parse the right-hand side as a TOML literal; fall back to a plain
        // string so unquoted names like `vp` work.
        let value = toml::from_str::<toml::Value>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.as_table_mut().and_then(|t| t.remove("v")))
            .unwrap_or_else(|| toml::Value::String(value.trim().to_string()));
        Ok(Self {
            path,
            value,
            raw: s.to_string(),
        })
    }
}

fn apply_override(doc: &mut toml::Value, o: &Override) -> Result<(), HarnessError> {
    let mut node = &mut *doc;
    for (i, seg) in o.path.iter().enumerate() {
        let table = node.as_table_mut().ok_or_else(|| {
            HarnessError::Config(format!(
                "override '{}' descends into a non-table at '{}'",
                o.raw,
                o.path[..i].join(".")
            ))
        })?;
        if i + 1 == o.path.len() {
            table.insert(seg.clone(), o.value.clone());
            return Ok(());
        }
        node = table
            .entry(seg.clone())
            .or_insert(toml::Value::Table(Default::default()));
    }
    Ok(())
}

/// Loads a config: embedded defaults, optionally replaced by a file, then
/// dotted overrides, then validation.
pub fn load_config(path: Option<&std::path::Path>, overrides: &[Override]) -> Result<ExperimentConfig, HarnessError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| {
            HarnessError::Config(format!("cannot read config file {}: {e}", p.display()))
        })?,
        None => DEFAULTS_TOML.to_string(),
    };
    let mut doc: toml::Value = toml::from_str(&text)
        .map_err(|e| HarnessError::Config(format!("config does not parse as TOML: {e}")))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let config: ExperimentConfig = doc
        .try_into()
        .map_err(|e| HarnessError::Config(format!("config does not match the schema: {e}")))?;
    config.validate()?;
    Ok(config)
}
