//! Report emission: a CSV table per experiment plus a JSON sidecar holding
//! the resolved config, library version, seed, and derived summaries. The
//! only field that changes between identical runs is the sidecar timestamp.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, OutputFormat};

/// A single report cell. Floats print with Rust's shortest round-trip
/// representation, so written values parse back bit-identically.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    /// Empty cell (a bound that is not computable for this row).
    Blank,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => write!(f, "{x}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(s) => {
                debug_assert!(!s.contains([',', '"', '\n']), "unquotable CSV text: {s}");
                write!(f, "{s}")
            }
            Value::Blank => Ok(()),
        }
    }
}

impl Value {
    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Num(x) => json!(x),
            Value::Int(i) => json!(i),
            Value::Text(s) => json!(s),
            Value::Blank => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut map = serde_json::Map::new();
                for (name, value) in self.columns.iter().zip(row) {
                    map.insert(name.clone(), value.to_json());
                }
                serde_json::Value::Object(map)
            })
            .collect();
        json!(records)
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    experiment: &'a str,
    library_version: &'a str,
    seed: u64,
    timestamp_unix_seconds: u64,
    workers: usize,
    incomplete: bool,
    config: &'a ExperimentConfig,
    summary: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    records: Option<serde_json::Value>,
}

pub struct Reporter<'a> {
    pub config: &'a ExperimentConfig,
    pub out_dir: PathBuf,
    pub workers: usize,
}

impl<'a> Reporter<'a> {
    pub fn new(config: &'a ExperimentConfig, out_dir: &Path, workers: usize) -> Result<Self> {
        std::fs::create_dir_all(out_dir)
            .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
        Ok(Reporter { config, out_dir: out_dir.to_path_buf(), workers })
    }

    /// Writes `<name>.csv` (when requested) and the `<name>.json` sidecar.
    /// Returns the written paths.
    pub fn emit(&self, name: &str, tables: &[(&str, &Table)], summary: serde_json::Value) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let formats = &self.config.output.formats;
        if formats.contains(&OutputFormat::Csv) {
            for (table_name, table) in tables {
                let path = self.out_dir.join(format!("{table_name}.csv"));
                std::fs::write(&path, table.to_csv())
                    .with_context(|| format!("cannot write {}", path.display()))?;
                written.push(path);
            }
        }
        let records = if formats.contains(&OutputFormat::Json) {
            let mut map = serde_json::Map::new();
            for (table_name, table) in tables {
                map.insert(table_name.to_string(), table.to_json());
            }
            Some(serde_json::Value::Object(map))
        } else {
            None
        };
        let sidecar = Sidecar {
            experiment: self.config.experiment.name(),
            library_version: env!("CARGO_PKG_VERSION"),
            seed: self.config.run.seed,
            timestamp_unix_seconds: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            workers: self.workers,
            incomplete: false,
            config: self.config,
            summary,
            records,
        };
        let path = self.out_dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(&sidecar)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(path);
        Ok(written)
    }

    /// Marks a failed run: writes an `error.json` flagging the report set as
    /// incomplete.
    pub fn emit_failure(&self, error: &str) {
        let payload = json!({
            "experiment": self.config.experiment.name(),
            "incomplete": true,
            "error": error,
        });
        let path = self.out_dir.join("error.json");
        if let Ok(mut text) = serde_json::to_string_pretty(&payload) {
            text.push('\n');
            let _ = std::fs::write(path, text);
        }
    }
}
