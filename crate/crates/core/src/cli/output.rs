//! Plot-ready tables written as CSV (with `#` comment header) or JSON.
//!
//! Floats are printed with 17 significant digits in exponent form so every
//! value re-parses to the identical `f64`.

use std::io::Write;

use serde_json::{json, Map, Value};

use super::config::{ScenarioConfig, CONFIG_HEADER_PREFIX};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
}

impl Cell {
    fn to_csv(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(x),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
        }
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn format_float(x: f64) -> String {
    // -0.0 would print with a sign
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Derived quantities recorded next to the config (`key = value`).
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, config: &ScenarioConfig, mut w: W) -> Result<()> {
        writeln!(w, "# cca-core {}", crate::VERSION)?;
        writeln!(w, "# command: {}", self.command)?;
        writeln!(w, "{CONFIG_HEADER_PREFIX}{}", config.to_json_compact())?;
        for (k, v) in &self.notes {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&cell.to_csv());
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, config: &ScenarioConfig, mut w: W) -> Result<()> {
        let notes: Map<String, Value> = self
            .notes
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, cell)| (c.to_string(), cell.to_json()))
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "generator": format!("cca-core {}", crate::VERSION),
            "command": self.command,
            "config": config,
            "notes": notes,
            "columns": self.columns,
            "records": records,
        });
        serde_json::to_writer(&mut w, &doc)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-0.0), "0.0000000000000000e0");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("spectrum", vec!["k", "frequency"]);
        t.note("theta", 0.5);
        t.push(vec![Cell::Int(1), Cell::Float(2.5)]);
        let mut buf = Vec::new();
        t.write_csv(&ScenarioConfig::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# cca-core "));
        assert_eq!(lines[1], "# command: spectrum");
        assert!(lines[2].starts_with(CONFIG_HEADER_PREFIX));
        assert_eq!(lines[3], "# theta = 0.5");
        assert_eq!(lines[4], "k,frequency");
        assert_eq!(lines[5], "1,2.5000000000000000e0");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_mirrors_rows() {
        let mut t = Table::new("tpd", vec!["t", "eta"]);
        t.push(vec![Cell::Float(0.0), Cell::Float(0.0)]);
        t.push(vec![Cell::Float(0.5), Cell::Float(0.25)]);
        let mut buf = Vec::new();
        t.write_json(&ScenarioConfig::default(), &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["command"], "tpd");
        assert_eq!(v["records"][1]["eta"], 0.25);
        assert_eq!(v["config"]["lattice"]["num_cavities"], 29);
    }

    proptest! {
        #[test]
        fn formatted_floats_reparse_exactly(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let back: f64 = format_float(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
