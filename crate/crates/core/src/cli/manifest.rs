//! CSV tables and the JSON manifest written next to each of them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
    pub description: &'static str,
}

impl Column {
    pub const fn new(name: &'static str, unit: &'static str, description: &'static str) -> Self {
        Column {
            name,
            unit,
            description,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Number(x) if x.is_nan() => "nan".into(),
            Cell::Number(x) => format!("{x:.12e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "pass" } else { "fail" }.into())
    }
}

/// A table with a commented header block documenting each column.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(title: impl Into<String>, columns: Vec<Column>) -> Self {
        CsvTable {
            title: title.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Fixed formatting, so equal tables render to equal bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {}", self.title).unwrap();
        for c in &self.columns {
            writeln!(out, "# {} [{}]: {}", c.name, c.unit, c.description).unwrap();
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(self.columns.iter().map(|c| c.name))
            .expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8"));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub sha256: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub timestamp: String,
    pub config_sha256: String,
    pub config: String,
    pub threads: usize,
    pub output: OutputFile,
    pub error_estimates: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `<stem>_<command>.csv` and its manifest into `dir`.
#[allow(clippy::too_many_arguments)]
pub fn write_run(
    dir: &Path,
    stem: &str,
    command: &str,
    config_text: &str,
    threads: usize,
    table: &CsvTable,
    error_estimates: BTreeMap<String, f64>,
    warnings: Vec<String>,
) -> Result<(PathBuf, PathBuf)> {
    let io = |e: std::io::Error| Error::invalid("outputs.directory", format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let csv_name = format!("{stem}_{command}.csv");
    let csv_path = dir.join(&csv_name);
    let body = table.render();
    std::fs::write(&csv_path, &body).map_err(io)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        config_sha256: sha256_hex(config_text.as_bytes()),
        config: config_text.into(),
        threads,
        output: OutputFile {
            path: PathBuf::from(csv_name),
            sha256: sha256_hex(body.as_bytes()),
            rows: table.rows.len(),
        },
        error_estimates,
        warnings,
    };
    let manifest_path = dir.join(format!("{stem}_{command}.manifest.json"));
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    std::fs::write(&manifest_path, json + "\n").map_err(io)?;
    Ok((csv_path, manifest_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> CsvTable {
        let mut t = CsvTable::new("demo", vec![Column::new("x", "1", "a value"), Column::new("status", "-", "ok or error")]);
        t.push(vec![1.5.into(), "ok".into()]);
        t.push(vec![f64::NAN.into(), "failed, badly".into()]);
        t
    }

    #[test]
    fn render_is_fixed() {
        let text = table().render();
        assert_eq!(
            text,
            "# demo\n# x [1]: a value\n# status [-]: ok or error\nx,status\n1.500000000000e0,ok\nnan,\"failed, badly\"\n"
        );
    }

    #[test]
    fn manifest_references_csv() {
        let dir = tempfile::tempdir().unwrap();
        let (csv, manifest) =
            write_run(dir.path(), "run", "demo", "x = 1", 2, &table(), BTreeMap::new(), vec![]).unwrap();
        let m: RunManifest = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
        assert_eq!(dir.path().join(&m.output.path), csv);
        assert_eq!(m.output.sha256, sha256_hex(&std::fs::read(&csv).unwrap()));
        assert_eq!(m.output.rows, 2);
    }
}
