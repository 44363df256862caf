use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::contract::{Deviation, Fingerprint, Verdict};
use crate::simcore::Counts;
use crate::{Error, Result};

use super::{ExperimentConfig, ExperimentKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFingerprint {
    pub name: String,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedDeviation {
    pub name: String,
    pub deviation: Deviation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsRecord {
    pub channel: String,
    pub observable: String,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub contract: String,
    pub family: Vec<String>,
    pub epsilon: f64,
    pub max_deviation: f64,
    pub argmax: String,
    pub verdict: Verdict,
}

/// A derived table; cells are pre-formatted so JSON and CSV agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("table_{}.csv", self.name)
    }
}

/// Full record of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub schema_version: u32,
    pub tool_version: String,
    pub backend: String,
    pub experiment: ExperimentKind,
    /// Wall-clock creation time; the only non-reproducible field.
    pub created_at: String,
    pub config: ExperimentConfig,
    pub spec_hashes: BTreeMap<String, String>,
    pub fingerprints: Vec<NamedFingerprint>,
    pub raw_counts: Vec<CountsRecord>,
    pub deviations: Vec<NamedDeviation>,
    pub verdicts: Vec<VerdictRecord>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl RunArtifact {
    pub fn new(config: &ExperimentConfig) -> Self {
        RunArtifact {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            backend: "simulator".to_string(),
            experiment: config.experiment,
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config: config.clone(),
            spec_hashes: BTreeMap::new(),
            fingerprints: Vec::new(),
            raw_counts: Vec::new(),
            deviations: Vec::new(),
            verdicts: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn fingerprint(&self, name: &str) -> Option<&Fingerprint> {
        self.fingerprints
            .iter()
            .find(|f| f.name == name)
            .map(|f| &f.fingerprint)
    }

    pub fn verdict(&self, contract: &str) -> Option<&VerdictRecord> {
        self.verdicts.iter().find(|v| v.contract == contract)
    }

    /// JSON with the timestamp blanked, for reproducibility comparisons.
    pub fn reproducible_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.created_at.clear();
        // the output directory is where the run landed, not what it computed
        copy.config.out = None;
        Ok(serde_json::to_string_pretty(&copy)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let a: RunArtifact = serde_json::from_str(text)?;
        for f in &a.fingerprints {
            f.fingerprint.validate()?;
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Both,
}

/// Write `run.json` and/or one `table_<name>.csv` per derived table into
/// `dir`, creating it if needed. Returns the written paths.
pub fn emit_report(artifact: &RunArtifact, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    if matches!(format, ReportFormat::Json | ReportFormat::Both) {
        let path = dir.join("run.json");
        let mut text = serde_json::to_string_pretty(artifact)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    if matches!(format, ReportFormat::Csv | ReportFormat::Both) {
        for table in &artifact.tables {
            let path = dir.join(table.file_name());
            let mut w = csv::Writer::from_path(&path).map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::io(&path, io),
                other => Error::Config(format!("{}: {other:?}", path.display())),
            })?;
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Fixed-precision cell formatting for tables.
pub(crate) fn cell(x: f64) -> String {
    format!("{x:.6}")
}
