//! Artifact emission: atomic file writes, numeric tables in either output
//! format, and the one-line run summary on standard output.
//!
//! Every table column names its unit: CSV headers read `key (unit)` and the
//! JSON form carries a `units` map next to the rows. Dimensionless columns
//! omit the suffix in CSV and say "dimensionless" in JSON.

use crate::CliError;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// An all-numeric table with per-column units.
pub struct Table {
    columns: Vec<(String, String)>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    /// `columns` are (key, unit) pairs; an empty unit means dimensionless.
    pub fn new(columns: Vec<(String, String)>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn to_csv(&self) -> String {
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|(key, unit)| {
                if unit.is_empty() {
                    key.clone()
                } else {
                    format!("{key} ({unit})")
                }
            })
            .collect();
        let mut text = header.join(",");
        text.push('\n');
        for row in &self.rows {
            let mut first = true;
            for value in row {
                if !first {
                    text.push(',');
                }
                write!(text, "{value}").expect("writing to a String cannot fail");
                first = false;
            }
            text.push('\n');
        }
        text
    }

    fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct JsonTable<'a> {
            units: Vec<[&'a str; 2]>,
            columns: Vec<&'a str>,
            rows: &'a [Vec<f64>],
        }
        let units = self
            .columns
            .iter()
            .map(|(key, unit)| {
                [key.as_str(), if unit.is_empty() { "dimensionless" } else { unit.as_str() }]
            })
            .collect();
        let columns = self.columns.iter().map(|(key, _)| key.as_str()).collect();
        let doc = JsonTable { units, columns, rows: &self.rows };
        serde_json::to_string(&doc).expect("numeric table serializes")
    }
}

/// Writes `bytes` to `<dir>/<name>` through a temp file in the same
/// directory, so a crash mid-write never leaves a truncated artifact.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, bytes)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", tmp.display())))?;
    let target = dir.join(name);
    fs::rename(&tmp, &target)
        .map_err(|e| CliError::io(format!("cannot move artifact into {}: {e}", target.display())))?;
    Ok(target)
}

/// Writes a table as `<stem>.csv` or `<stem>.json` following `format`.
pub fn write_table(
    dir: &Path,
    stem: &str,
    format: Format,
    table: &Table,
) -> Result<PathBuf, CliError> {
    let rendered = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    write_atomic(dir, &format!("{stem}.{}", format.extension()), rendered.as_bytes())
}

/// Writes a result document as JSON regardless of the table format.
pub fn write_json_document<T: Serialize>(
    dir: &Path,
    name: &str,
    document: &T,
) -> Result<PathBuf, CliError> {
    let rendered = serde_json::to_string_pretty(document)
        .map_err(|e| CliError::io(format!("cannot serialize {name}: {e}")))?;
    write_atomic(dir, name, rendered.as_bytes())
}

/// Prints the machine-readable run summary: one JSON line on stdout.
pub fn print_summary<T: Serialize>(summary: &T) {
    println!("{}", serde_json::to_string(summary).expect("summary serializes"));
}

/// Reports an artifact on standard error when verbosity asks for it.
pub fn note_artifact(verbose: u8, path: &Path, rows: usize) {
    if verbose > 0 {
        eprintln!("wrote {} ({rows} rows)", path.display());
    }
}
