//! Tables and JSON documents written to a file or stdout.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn text(&self) -> String {
        match *self {
            Cell::Int(k) => k.to_string(),
            Cell::Num(x) => fmt_f64(x),
        }
    }

    fn json(&self) -> serde_json::Value {
        match *self {
            Cell::Int(k) => k.into(),
            Cell::Num(x) => serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, Into::into),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn nums(row: impl IntoIterator<Item = f64>) -> Vec<Cell> {
        row.into_iter().map(Cell::Num).collect()
    }

    pub fn write(&self, out: Option<&Path>, format: Format) -> anyhow::Result<()> {
        let mut w = sink(out)?;
        match format {
            Format::Csv => {
                let mut c = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(&mut w);
                c.write_record(&self.header)?;
                for r in &self.rows {
                    c.write_record(r.iter().map(Cell::text))?;
                }
                c.flush()?;
            }
            Format::Json => {
                let docs: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|r| self.header.iter().cloned().zip(r.iter().map(Cell::json)).collect())
                    .collect();
                serde_json::to_writer_pretty(&mut w, &docs)?;
                writeln!(w)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_digits() {
        for x in [1.0 / 3.0, 20.0 / 3.0, -1e-300, 6.02214076e23, 0.1 + 0.2] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }
}
