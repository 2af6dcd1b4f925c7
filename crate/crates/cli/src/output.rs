use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone)]
pub struct OutputSpec {
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Significant decimal digits, 3..=17.
    pub precision: usize,
}

impl OutputSpec {
    /// Rounds to `precision` significant digits so that printed values do
    /// not depend on the last bits of a computation.
    pub fn round(&self, x: f64) -> f64 {
        if !x.is_finite() || x == 0.0 {
            return if x == 0.0 { 0.0 } else { x };
        }
        format!("{:.*e}", self.precision - 1, x).parse().unwrap_or(x)
    }

    pub fn json<T: Serialize>(&self, v: &T) -> Result<Value> {
        let mut value = serde_json::to_value(v)?;
        self.round_value(&mut value);
        Ok(value)
    }

    fn round_value(&self, v: &mut Value) {
        match v {
            Value::Number(n) if n.is_f64() => {
                let x = self.round(n.as_f64().unwrap_or(0.0));
                *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
            }
            Value::Array(items) => items.iter_mut().for_each(|x| self.round_value(x)),
            Value::Object(map) => map.values_mut().for_each(|x| self.round_value(x)),
            _ => {}
        }
    }

    pub fn fmt(&self, x: f64) -> String {
        self.round(x).to_string()
    }
}

/// Writes `bytes` to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn json_bytes(v: &Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}
impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// A CSV table preceded by one `#` comment line describing the columns.
pub struct Table {
    pub comment: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(comment: impl Into<String>, header: Vec<&'static str>) -> Self {
        Self {
            comment: comment.into(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, spec: &OutputSpec) -> Result<Vec<u8>> {
        let mut buf = format!("# {}\n", self.comment).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.header)?;
            for row in &self.rows {
                w.write_record(row.iter().map(|c| match c {
                    Cell::Num(x) => spec.fmt(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(s) => s.clone(),
                }))?;
            }
            w.flush()?;
        }
        Ok(buf)
    }
}

pub fn unsupported(command: &str, format: Format) -> anyhow::Error {
    UsageError(format!(
        "{command} does not produce {} output",
        format!("{format:?}").to_lowercase()
    ))
    .into()
}
