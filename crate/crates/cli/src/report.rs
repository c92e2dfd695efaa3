//! Tabular reports and their three renderings.
//!
//! CSV: a `# schema=1` line, then `# key=value` metadata, a header row and the
//! data rows, with floats at 17 significant digits. JSON: an object with
//! `schema`, `command`, `meta` and `rows`, floats in shortest round-trip form
//! and arbitrary-size integers as strings. Table: aligned columns with 10
//! significant digits.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i128),
    Big(BigUint),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        Cell::Big(BigUint::from(v))
    }
}

impl From<BigUint> for Cell {
    fn from(v: BigUint) -> Self {
        Cell::Big(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report { command, meta: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_owned(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema={SCHEMA_VERSION}\n");
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={}", csv_cell(v));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json_cell(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), json_cell(v))).collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "meta": meta,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "{k}: {}", table_cell(v));
        }
        if self.rows.is_empty() {
            return out;
        }
        if !self.meta.is_empty() {
            out.push('\n');
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(table_cell).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| -> String {
            let padded: Vec<String> =
                items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}", w = *w)).collect();
            padded.join("  ").trim_end().to_string()
        };
        out.push_str(&line(self.columns.clone()));
        out.push('\n');
        out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect()));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row.iter().map(|s| s.as_str()).collect()));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits.
pub fn machine_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// 10 significant digits, positional for moderate magnitudes.
pub fn table_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.9e}")
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Float(v) => machine_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Big(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Empty => String::new(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Int(v) => match i64::try_from(*v) {
            Ok(i) => Value::from(i),
            Err(_) => Value::String(v.to_string()),
        },
        Cell::Big(v) => Value::String(v.to_string()),
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Empty => Value::Null,
        Cell::Text(s) => Value::String(s.clone()),
    }
}

fn table_cell(c: &Cell) -> String {
    match c {
        Cell::Float(v) => table_float(*v),
        Cell::Empty => "-".into(),
        other => csv_cell(other).trim_matches('"').to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec!["x", "count", "label"]);
        r.meta("n", 2u32);
        r.row(vec![Cell::from(0.1), Cell::from(BigUint::from(10u32).pow(30)), Cell::from("a,b")]);
        r.row(vec![Cell::from(f64::NAN), Cell::Empty, Cell::from("plain")]);
        r
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# schema=1");
        assert_eq!(lines[1], "# n=2");
        assert_eq!(lines[2], "x,count,label");
        assert_eq!(lines[3], "1.0000000000000001e-1,1000000000000000000000000000000,\"a,b\"");
        assert_eq!(lines[4], "NaN,,plain");
    }

    #[test]
    fn machine_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, 6.02214076e23, -2.5e-7] {
            assert_eq!(machine_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn table_floats() {
        assert_eq!(table_float(0.411_233_516_712_056_6), "0.4112335167");
        assert_eq!(table_float(8.0), "8.000000000");
        assert_eq!(table_float(1.5e-7), "1.500000000e-7");
        assert_eq!(table_float(0.0), "0");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["meta"]["n"], 2);
        assert_eq!(v["rows"][0]["count"], "1000000000000000000000000000000");
        assert_eq!(v["rows"][0]["x"].as_f64(), Some(0.1));
        assert!(v["rows"][1]["x"].is_null());
    }
}
