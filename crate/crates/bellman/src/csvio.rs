//! CSV files of step functions (`t_start,t_end,value`) and extremizer samples
//! (`t,g,hardy_avg`).

use std::io::{Read, Write};

use bellman_core::{DyadicStepFunction, StepFunction};

use crate::json::format_f64;

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },
    #[error(transparent)]
    Core(#[from] bellman_core::Error),
}

impl CsvError {
    /// Whether the failure came from the file system rather than the content.
    pub fn is_io(&self) -> bool {
        match self {
            CsvError::Io(_) => true,
            CsvError::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}

pub const STEP_HEADER: [&str; 3] = ["t_start", "t_end", "value"];
pub const SAMPLE_HEADER: [&str; 3] = ["t", "g", "hardy_avg"];

/// Writes the cells of a step function.
pub fn write_step_function<W: Write>(out: W, sf: &StepFunction) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STEP_HEADER)?;
    for (a, b, v) in sf.cells() {
        w.write_record([format_f64(a), format_f64(b), format_f64(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the cells `[j 2^{-m}, (j+1) 2^{-m})` of a dyadic step function.
pub fn write_dyadic<W: Write>(out: W, phi: &DyadicStepFunction) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STEP_HEADER)?;
    let n = phi.values().len();
    for (j, v) in phi.values().iter().enumerate() {
        let a = j as f64 / n as f64;
        let b = (j + 1) as f64 / n as f64;
        w.write_record([format_f64(a), format_f64(b), format_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `t_start,t_end,value` rows into a step function. Consecutive rows
/// must share their endpoints.
pub fn read_step_function<R: Read>(input: R) -> Result<StepFunction, CsvError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != STEP_HEADER {
        return Err(CsvError::Format {
            line: 1,
            message: "expected header t_start,t_end,value".into(),
        });
    }
    let mut breaks = vec![];
    let mut values = vec![];
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64, CsvError> {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| CsvError::Format {
                    line,
                    message: format!("column {} is not a number", i + 1),
                })
        };
        let (a, b, v) = (num(0)?, num(1)?, num(2)?);
        match breaks.last() {
            None => breaks.push(a),
            Some(prev) if *prev != a => {
                return Err(CsvError::Format {
                    line,
                    message: "cells must be contiguous".into(),
                })
            }
            _ => {}
        }
        breaks.push(b);
        values.push(v);
    }
    Ok(StepFunction::new(breaks, values)?)
}

/// Reads a CSV whose cells are the `2^m` uniform dyadic cells of some level.
pub fn read_dyadic<R: Read>(input: R) -> Result<DyadicStepFunction, CsvError> {
    let sf = read_step_function(input)?;
    let n = sf.len();
    if !n.is_power_of_two() {
        return Err(CsvError::Format {
            line: 0,
            message: "number of cells must be a power of two".into(),
        });
    }
    for (j, (a, b, _)) in sf.cells().enumerate() {
        let lo = j as f64 / n as f64;
        let hi = (j + 1) as f64 / n as f64;
        if (a - lo).abs() > 1e-12 || (b - hi).abs() > 1e-12 {
            return Err(CsvError::Format {
                line: j as u64 + 2,
                message: "cells must be the uniform dyadic cells".into(),
            });
        }
    }
    Ok(DyadicStepFunction::new(n.trailing_zeros(), sf.values().to_vec())?)
}

/// Writes `(t, g(t), hardy_avg(t))` rows.
pub fn write_samples<W: Write>(out: W, rows: &[(f64, f64, f64)]) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_HEADER)?;
    for (t, g, h) in rows {
        w.write_record([format_f64(*t), format_f64(*g), format_f64(*h)])?;
    }
    w.flush()?;
    Ok(())
}
