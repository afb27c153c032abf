//! Metrics persistence: the per-step CSV stream and summary statistics.
//!
//! The CSV header is a contract consumed by the plotting pipeline:
//! `episode,step,reward,secrecy_rate_bpshz,energy_j,violations,wall_ms`.
//! `wall_ms` is the simulated mission clock (elapsed slot time), so repeated
//! runs of the same seed and config produce byte-identical files.

use std::io::Write;
use std::path::Path;

use swarmbeam_core::gdmtd3::{StepRow, StepSink};

use crate::HarnessError;

pub const CSV_HEADER: &str = "episode,step,reward,secrecy_rate_bpshz,energy_j,violations,wall_ms";

/// Buffered CSV writer for step rows. Rows are appended in (episode, step)
/// order with a monotone simulated clock.
pub struct CsvMetrics {
    out: std::io::BufWriter<std::fs::File>,
    slot_ms: f64,
    rows_written: u64,
}

impl CsvMetrics {
    pub fn create(path: &Path, slot_seconds: f64) -> Result<Self, HarnessError> {
        let file = std::fs::File::create(path)
            .map_err(|e| HarnessError::Runtime(format!("cannot create {}: {e}", path.display())))?;
        let mut out = std::io::BufWriter::new(file);
        writeln!(out, "{CSV_HEADER}")
            .map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(Self {
            out,
            slot_ms: slot_seconds * 1000.0,
            rows_written: 0,
        })
    }

    pub fn write_row(&mut self, row: &StepRow) -> Result<(), HarnessError> {
        self.rows_written += 1;
        let wall_ms = (self.rows_written as f64 * self.slot_ms).round() as u64;
        writeln!(
            self.out,
            "{},{},{},{},{},{},{}",
            row.episode,
            row.step,
            row.reward,
            row.secrecy_rate_bpshz,
            row.energy_j,
            row.violations,
            wall_ms
        )
        .map_err(|e| HarnessError::Runtime(format!("csv write failed: {e}")))
    }

    pub fn finish(mut self) -> Result<u64, HarnessError> {
        self.out
            .flush()
            .map_err(|e| HarnessError::Runtime(format!("csv flush failed: {e}")))?;
        Ok(self.rows_written)
    }
}

/// Adapter so the training loop can stream rows straight into the CSV; any
/// write failure is reported once at `finish` time via the stored error.
pub struct CsvSink {
    metrics: CsvMetrics,
    error: Option<HarnessError>,
}

impl CsvSink {
    pub fn new(metrics: CsvMetrics) -> Self {
        Self {
            metrics,
            error: None,
        }
    }

    pub fn finish(self) -> Result<u64, HarnessError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        self.metrics.finish()
    }
}

impl StepSink for CsvSink {
    fn record(&mut self, row: &StepRow) {
        if self.error.is_none() {
            if let Err(e) = self.metrics.write_row(row) {
                self.error = Some(e);
            }
        }
    }
}

/// Parses a metrics CSV back into rows; used by the tests and the sweep
/// aggregator.
pub fn read_csv(path: &Path) -> Result<Vec<StepRow>, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(HarnessError::Runtime(format!(
                "{} has unexpected header {other:?}",
                path.display()
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(HarnessError::Runtime(format!(
                "{} line {}: expected 7 fields, got {}",
                path.display(),
                i + 2,
                fields.len()
            )));
        }
        let parse_err = |what: &str| {
            HarnessError::Runtime(format!("{} line {}: bad {what}", path.display(), i + 2))
        };
        rows.push(StepRow {
            episode: fields[0].parse().map_err(|_| parse_err("episode"))?,
            step: fields[1].parse().map_err(|_| parse_err("step"))?,
            reward: fields[2].parse().map_err(|_| parse_err("reward"))?,
            secrecy_rate_bpshz: fields[3].parse().map_err(|_| parse_err("secrecy"))?,
            energy_j: fields[4].parse().map_err(|_| parse_err("energy"))?,
            violations: fields[5].parse().map_err(|_| parse_err("violations"))?,
        });
    }
    Ok(rows)
}
