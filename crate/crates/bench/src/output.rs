//! Result rows and their CSV / JSON encodings.
//!
//! Both encodings carry the same keys in the same order. Floating-point
//! fields are rounded to 9 significant digits before writing, so a row read
//! back from either file compares equal to the rounded original.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const CSV_HEADER: [&str; 10] = [
    "seed",
    "N",
    "G",
    "K",
    "axis_value",
    "algorithm",
    "iterations",
    "objective_nats",
    "objective_bits",
    "runtime_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRow {
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "G")]
    pub g: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// Empty in CSV and `null` in JSON when no axis is swept.
    pub axis_value: Option<f64>,
    pub algorithm: String,
    pub iterations: usize,
    pub objective_nats: f64,
    pub objective_bits: f64,
    pub runtime_ms: f64,
}

impl ResultRow {
    fn rounded(&self) -> Self {
        Self {
            axis_value: self.axis_value.map(round_sig9),
            objective_nats: round_sig9(self.objective_nats),
            objective_bits: round_sig9(self.objective_bits),
            runtime_ms: round_sig9(self.runtime_ms),
            ..self.clone()
        }
    }
}

/// Rounds to 9 significant decimal digits.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(BenchError::Config(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row.rounded())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    let rounded: Vec<ResultRow> = rows.iter().map(ResultRow::rounded).collect();
    serde_json::to_writer_pretty(&mut out, &rounded)?;
    out.write_all(b"\n").map_err(serde_json::Error::io)?;
    Ok(())
}

pub fn to_string(rows: &[ResultRow], format: Format) -> String {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(rows, &mut buf),
        Format::Json => write_json(rows, &mut buf),
    }
    .expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("encoders emit UTF-8")
}

/// Writes `rows` to `path`; I/O failures carry the path.
pub fn emit(rows: &[ResultRow], path: &Path, format: Format) -> Result<()> {
    let io_err = |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    out.write_all(to_string(rows, format).as_bytes())
        .map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Parses a results CSV; the header must match [`CSV_HEADER`] exactly.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = r.headers()?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(BenchError::Config(format!(
            "unexpected CSV header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(BenchError::from))
        .collect()
}

pub fn parse_json(text: &str) -> Result<Vec<ResultRow>> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse(text: &str, format: Format) -> Result<Vec<ResultRow>> {
    match format {
        Format::Csv => parse_csv(text),
        Format::Json => parse_json(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(seed: u64, axis: Option<f64>, nats: f64) -> ResultRow {
        ResultRow {
            seed,
            n: 16,
            g: 2,
            k: 4,
            axis_value: axis,
            algorithm: "mm".into(),
            iterations: 12,
            objective_nats: nats,
            objective_bits: nats / std::f64::consts::LN_2,
            runtime_ms: 3.25,
        }
    }

    #[test]
    fn empty_rows_give_header_only() {
        let s = to_string(&[], Format::Csv);
        assert_eq!(
            s,
            "seed,N,G,K,axis_value,algorithm,iterations,objective_nats,objective_bits,runtime_ms\n"
        );
        assert!(parse_csv(&s).unwrap().is_empty());
        assert_eq!(parse_json(&to_string(&[], Format::Json)).unwrap(), vec![]);
    }

    #[test]
    fn csv_and_json_agree() {
        let rows = vec![row(0, Some(10.0), 7.123456789123), row(1, None, 0.0)];
        let from_csv = parse_csv(&to_string(&rows, Format::Csv)).unwrap();
        let from_json = parse_json(&to_string(&rows, Format::Json)).unwrap();
        assert_eq!(from_csv, from_json);
        assert_eq!(from_csv[1].axis_value, None);
        assert_eq!(from_csv[0].objective_nats, 7.12345679);
    }

    #[test]
    fn header_is_checked() {
        assert!(parse_csv(
            "seed,n,G,K,axis_value,algorithm,iterations,objective_nats,objective_bits,runtime_ms\n"
        )
        .is_err());
        assert!(parse_csv("").is_err());
    }

    #[test]
    fn sig9_rounding() {
        assert_eq!(round_sig9(1.234567891234), 1.23456789);
        assert_eq!(round_sig9(-9.87654321987e-7), -9.87654322e-7);
        assert_eq!(round_sig9(0.0), 0.0);
        assert_eq!(round_sig9(12.0), 12.0);
    }

    #[test]
    fn emit_reports_path_on_failure() {
        let err = emit(&[], Path::new("/nonexistent-dir/out.csv"), Format::Csv).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/out.csv"));
    }
}
