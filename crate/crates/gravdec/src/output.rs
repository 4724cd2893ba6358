//! Deterministic CSV tables with JSON sidecars.
//!
//! Floats are written in shortest round-trip scientific notation; the sidecar
//! carries the command, inputs, seed and crate version and no timestamps.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::ReportError;

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Appends a constant column, e.g. the provenance of every row.
    pub fn with_column(mut self, name: &str, values: Vec<String>) -> Self {
        self.header.push(name.to_string());
        for (row, v) in self.rows.iter_mut().zip(values) {
            row.push(Cell::Text(v));
        }
        self
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| ReportError::Io {
            path: PathBuf::from("<buffer>"),
            source: e.into_error(),
        })
    }
}

/// Sidecar metadata. `inputs` should hold everything the table depends on.
pub fn sidecar(command: &str, seed: Option<u64>, inputs: Value, table: &Table) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("seed".into(), seed.map_or(Value::Null, |s| json!(s)));
    m.insert("inputs".into(), inputs);
    m.insert("columns".into(), json!(table.header));
    m.insert("rows".into(), json!(table.rows.len()));
    Value::Object(m)
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`; returns both paths.
pub fn write_table(dir: &Path, stem: &str, table: &Table, meta: &Value) -> Result<Vec<PathBuf>, ReportError> {
    std::fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    let write = |p: &Path, bytes: &[u8]| {
        std::fs::write(p, bytes).map_err(|source| ReportError::Io {
            path: p.to_path_buf(),
            source,
        })
    };
    write(&csv_path, &table.to_csv()?)?;
    let mut js = serde_json::to_vec_pretty(meta)?;
    js.push(b'\n');
    write(&json_path, &js)?;
    Ok(vec![csv_path, json_path])
}
