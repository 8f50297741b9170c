use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One estimated probability. Exact rows carry `trials = 0` and `stderr = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub label: String,
    pub n: usize,
    /// Number of partition parts `|P|` (0 when not applicable).
    pub parts: usize,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl EstimateRow {
    /// `hits / trials` with standard error `sqrt(p (1 - p) / trials)`.
    pub fn from_count(
        label: impl Into<String>,
        n: usize,
        parts: usize,
        trials: u64,
        hits: u64,
        seed: u64,
    ) -> Self {
        let p = hits as f64 / trials as f64;
        EstimateRow {
            label: label.into(),
            n,
            parts,
            trials,
            estimate: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
        }
    }

    pub fn exact(label: impl Into<String>, n: usize, parts: usize, value: f64) -> Self {
        EstimateRow {
            label: label.into(),
            n,
            parts,
            trials: 0,
            estimate: value,
            stderr: 0.0,
            seed: 0,
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.stderr
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Writes a header row and one row per estimate.
pub fn write_csv<W: Write>(rows: &[EstimateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    if rows.is_empty() {
        w.write_record(["label", "n", "parts", "trials", "estimate", "stderr", "seed"])
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}

/// Reads rows written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<EstimateRow>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<EstimateRow>, _>>()
        .map_err(csv_error)?;
    for row in &rows {
        if !(0.0..=1.0).contains(&row.estimate) {
            return Err(Error::Parse {
                line: 0,
                message: format!("estimate {} outside [0, 1]", row.estimate),
            });
        }
    }
    Ok(rows)
}
