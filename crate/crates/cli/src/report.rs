//! The report document and its three renderings: JSON, CSV and text tables.

use std::io::Write;

use csd_core::Degree;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cache::CacheStats;

/// Version of the JSON report schema and of the cache layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    /// Absent when no cache directory is configured.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<CacheHits>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHits {
    pub hits: usize,
    pub misses: usize,
}

impl From<CacheStats> for CacheHits {
    fn from(s: CacheStats) -> Self {
        CacheHits { hits: s.hits, misses: s.misses }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: Value,
    pub specs: Vec<String>,
    pub results: Value,
    pub timing: Timing,
}

/// One CSV record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub spec: String,
    pub class: String,
    pub measure: String,
    pub value: String,
}

impl Row {
    pub fn new(spec: &str, class: impl Into<String>, measure: impl Into<String>, value: impl ToString) -> Self {
        Row {
            spec: spec.to_string(),
            class: class.into(),
            measure: measure.into(),
            value: value.to_string(),
        }
    }
}

/// What a command produced, before rendering.
pub struct Output {
    pub command: Value,
    pub specs: Vec<String>,
    pub results: Value,
    pub rows: Vec<Row>,
    pub text: String,
    /// A verification check failed.
    pub failed: bool,
}

impl Output {
    pub fn document(&self, timing: Timing) -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: self.command.clone(),
            specs: self.specs.clone(),
            results: self.results.clone(),
            timing,
        }
    }

    pub fn write(&self, format: Format, timing: Timing, out: &mut impl Write) -> Result<(), crate::error::CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.document(timing))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                if self.rows.is_empty() {
                    w.write_record(["spec", "class", "measure", "value"])?;
                }
                for row in &self.rows {
                    w.serialize(row)?;
                }
                w.flush()?;
            }
            Format::Human => out.write_all(self.text.as_bytes())?,
        }
        Ok(())
    }
}

/// A float rendered with six significant digits.
pub fn approx6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `41/49`, or `1` for whole numbers.
pub fn frac(d: &Degree) -> String {
    if d.denom() == &1.into() {
        d.numer().to_string()
    } else {
        d.to_string()
    }
}

/// `41/49 ≈ 0.836735`; whole numbers print without the approximation.
pub fn show(d: &Degree) -> String {
    if d.denom() == &1.into() {
        frac(d)
    } else {
        format!("{d} ≈ {}", approx6(d.approx()))
    }
}

/// Left-aligned plain-text table.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = headers.iter().map(|h| width(h)).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(width(cell));
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.push_str(&" ".repeat(w - width(cell) + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(approx6(41.0 / 49.0), "0.836735");
        assert_eq!(approx6(1.0), "1.00000");
        assert_eq!(approx6(1.0 / 102.0), "0.00980392");
        assert_eq!(show(&Degree::new(41, 49)), "41/49 ≈ 0.836735");
        assert_eq!(show(&Degree::one()), "1");
    }

    #[test]
    fn table_alignment() {
        let t = table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz  1\n");
    }
}
