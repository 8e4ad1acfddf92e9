//! Tabular output for the command-line tool: CSV or JSON, numbers with
//! twelve significant digits.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Significant digits used for every number written.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// `%.{digits}g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl OutputTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        OutputTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn text(cell: &Cell) -> String {
        match cell {
            Cell::Num(v) => format_sig(*v, SIGNIFICANT_DIGITS),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Internal(format!("writing CSV: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Self::text)).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Internal(format!("writing CSV: {e}")))
    }

    /// Array of objects keyed by column name, in column order. Non-finite
    /// numbers become `null`.
    pub fn to_json(&self) -> Value {
        let rows = self.rows.iter().map(|row| {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, cell)| {
                    let v = match cell {
                        Cell::Num(x) if x.is_finite() => {
                            let rounded: f64 = format_sig(*x, SIGNIFICANT_DIGITS)
                                .parse()
                                .expect("round trip");
                            Value::from(rounded)
                        }
                        Cell::Num(_) => Value::Null,
                        Cell::Bool(b) => Value::from(*b),
                        Cell::Text(s) => Value::from(s.as_str()),
                    };
                    (c.clone(), v)
                })
                .collect();
            Value::Object(obj)
        });
        Value::Array(rows.collect())
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                let s = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| Error::Internal(format!("writing JSON: {e}")))?;
                writeln!(out, "{s}").map_err(|e| Error::Internal(format!("writing JSON: {e}")))
            }
        }
    }
}
