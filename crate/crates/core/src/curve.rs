//! Optimal-versus-Gaussian cost comparison and ratio curves.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{check_sensitivity, DomainError};
use crate::fmt::fmt_num;
use crate::gaussian::{calibrate_gaussian, Convention};
use crate::optimal::min_cost_ln;

/// Cost of both mechanisms at one delta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub delta: f64,
    pub sensitivity: f64,
    pub n: f64,
    pub convention: Convention,
    pub gaussian_cost: f64,
    pub optimal_cost: f64,
    /// `optimal_cost / gaussian_cost`.
    pub ratio: f64,
}

pub fn compare(delta: f64, sensitivity: f64, n: f64, convention: Convention) -> Result<Comparison, DomainError> {
    let optimal_cost = min_cost_ln(delta, sensitivity, n)?;
    let gaussian_cost = calibrate_gaussian(delta, sensitivity)?.cost(n, convention)?;
    Ok(Comparison {
        delta,
        sensitivity,
        n,
        convention,
        gaussian_cost,
        optimal_cost,
        ratio: optimal_cost / gaussian_cost,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub delta: f64,
    pub optimal_cost: f64,
    pub gaussian_cost: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTable {
    pub n: f64,
    pub sensitivity: f64,
    pub rows: Vec<CurveRow>,
}

pub const CSV_HEADER: [&str; 4] = ["delta", "optimal_cost", "gaussian_cost", "ratio"];

impl CurveTable {
    /// Tabulates the comparison on `delta_min, delta_min + step, ...` up to
    /// `delta_max` inclusive.
    pub fn build(
        n: f64,
        sensitivity: f64,
        delta_min: f64,
        delta_max: f64,
        step: f64,
        convention: Convention,
    ) -> Result<Self, DomainError> {
        check_sensitivity(sensitivity)?;
        if !(0.0 < delta_min && delta_min < delta_max && delta_max < 1.0) {
            return Err(DomainError::invalid(format!(
                "delta range must satisfy 0 < delta_min < delta_max < 1, got [{delta_min}, {delta_max}]"
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(DomainError::invalid(format!("step must be positive, got {step}")));
        }
        let count = ((delta_max - delta_min) / step + 1e-9).floor() as usize + 1;
        let rows = (0..count)
            .map(|i| {
                // snap to the grid so 0.01 + 29 * 0.01 prints as 0.3
                let delta = round_to_step(delta_min + step * i as f64, step);
                let c = compare(delta, sensitivity, n, convention)?;
                Ok(CurveRow { delta, optimal_cost: c.optimal_cost, gaussian_cost: c.gaussian_cost, ratio: c.ratio })
            })
            .collect::<Result<Vec<_>, DomainError>>()?;
        Ok(CurveTable { n, sensitivity, rows })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        for r in &self.rows {
            out.write_record([fmt_num(r.delta), fmt_num(r.optimal_cost), fmt_num(r.gaussian_cost), fmt_num(r.ratio)])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Parses rows written by [`CurveTable::write_csv`]; `n` and
    /// `sensitivity` are not part of the file and must be supplied.
    pub fn read_csv<R: Read>(r: R, n: f64, sensitivity: f64) -> Result<Self, DomainError> {
        let mut reader = csv::Reader::from_reader(r);
        let headers = reader.headers().map_err(|e| DomainError::invalid(e.to_string()))?.clone();
        if headers.iter().ne(CSV_HEADER) {
            return Err(DomainError::invalid(format!("curve CSV header must be {}", CSV_HEADER.join(","))));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.deserialize::<(f64, f64, f64, f64)>().enumerate() {
            let (delta, optimal_cost, gaussian_cost, ratio) =
                rec.map_err(|e| DomainError::invalid(format!("line {}: {e}", i + 2)))?;
            rows.push(CurveRow { delta, optimal_cost, gaussian_cost, ratio });
        }
        Ok(CurveTable { n, sensitivity, rows })
    }
}

fn round_to_step(x: f64, step: f64) -> f64 {
    let digits = (-step.log10()).ceil().max(0.0) as i32 + 3;
    let scale = 10f64.powi(digits.min(15));
    (x * scale).round() / scale
}
