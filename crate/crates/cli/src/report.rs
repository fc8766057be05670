//! CSV tables and a JSON summary per command, written byte-deterministically.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliResult;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal form; empty for missing values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &str, header: &[&str]) -> Self {
        Table { file: file.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| std::io::Error::other(e.to_string()).into())
    }
}

fn csv_err(e: csv::Error) -> crate::error::CliError {
    std::io::Error::other(e.to_string()).into()
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), tables: Vec::new(), summary: Map::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).expect("summary value serializes"));
    }

    pub fn json(&self, cfg: &RunConfig) -> String {
        let doc = json!({
            "tool": "anosovlab",
            "version": TOOL_VERSION,
            "command": self.command,
            "config_hash": cfg.hash(),
            "seed": cfg.seed,
            "tables": self.tables.iter().map(|t| t.file.clone()).collect::<Vec<_>>(),
            "summary": Value::Object(self.summary.clone()),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }

    /// Writes every table and `<command>.json` into `dir`.
    pub fn write(&self, cfg: &RunConfig, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir)?;
        for t in &self.tables {
            std::fs::write(dir.join(&t.file), t.to_csv()?)?;
        }
        std::fs::write(dir.join(format!("{}.json", self.command)), self.json(cfg))?;
        Ok(())
    }
}
