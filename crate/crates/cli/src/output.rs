//! Deterministic JSON and CSV rendering.
//!
//! Floats are always written as `{:.16e}` (17 significant digits, scientific),
//! keys keep insertion order, lines end in LF.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};
use crate::params::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Nums(Vec<f64>),
    Obj(Record),
    Rows(Vec<Record>),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.to_string())
    }
}

impl From<Vec<f64>> for Field {
    fn from(v: Vec<f64>) -> Self {
        Field::Nums(v)
    }
}

impl From<Record> for Field {
    fn from(v: Record) -> Self {
        Field::Obj(v)
    }
}

impl From<&Value> for Field {
    fn from(v: &Value) -> Self {
        match v {
            Value::Real(x) => Field::Num(*x),
            Value::Count(x) => Field::Int(*x),
            Value::Flag(x) => Field::Bool(*x),
            Value::Text(x) => Field::Str(x.clone()),
        }
    }
}

/// Ordered key/value record.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn fields(&self) -> &[(String, Field)] {
        &self.fields
    }
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn write_field(out: &mut String, field: &Field, indent: usize) {
    match field {
        Field::Num(v) => out.push_str(&format_number(*v)),
        Field::Int(v) => write!(out, "{v}").unwrap(),
        Field::Bool(v) => write!(out, "{v}").unwrap(),
        Field::Str(s) => out.push_str(&json_string(s)),
        Field::Nums(vs) => {
            out.push('[');
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&format_number(*v));
            }
            out.push(']');
        }
        Field::Obj(r) => write_record(out, r, indent),
        Field::Rows(rows) => {
            if rows.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, r) in rows.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                write_record(out, r, indent + 1);
                out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
    }
}

fn write_record(out: &mut String, record: &Record, indent: usize) {
    if record.fields.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (i, (k, v)) in record.fields.iter().enumerate() {
        out.push_str(&"  ".repeat(indent + 1));
        out.push_str(&json_string(k));
        out.push_str(": ");
        write_field(out, v, indent + 1);
        out.push_str(if i + 1 < record.fields.len() { ",\n" } else { "\n" });
    }
    out.push_str(&"  ".repeat(indent));
    out.push('}');
}

pub fn to_json(record: &Record) -> String {
    let mut out = String::new();
    write_record(&mut out, record, 0);
    out.push('\n');
    out
}

fn csv_cell(field: &Field) -> String {
    match field {
        Field::Num(v) => format_number(*v),
        Field::Int(v) => v.to_string(),
        Field::Bool(v) => v.to_string(),
        Field::Str(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Field::Str(s) => s.clone(),
        Field::Nums(vs) => vs.iter().map(|v| format_number(*v)).collect::<Vec<_>>().join(";"),
        Field::Obj(_) | Field::Rows(_) => unreachable!("nested values are not written as CSV cells"),
    }
}

/// Scalar fields as `key,value` rows.
pub fn record_to_csv(record: &Record) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in &record.fields {
        if !matches!(v, Field::Obj(_) | Field::Rows(_)) {
            writeln!(out, "{k},{}", csv_cell(v)).unwrap();
        }
    }
    out
}

/// Rows sharing the same keys as a table with a header line.
pub fn rows_to_csv(header: &[&str], rows: &[Record]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.fields.iter().map(|(_, v)| csv_cell(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Resolves `path` against `QUANTON_OUT` when it is relative.
pub fn resolve_output_path(path: &Path, out_dir: Option<&Path>) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes `contents` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
