//! Coefficient vectors of normalized traces and their JSON-lines form.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::normalize::NormalizedTrace;
use crate::basis::{project, OrthoBasis};
use crate::error::{Error, Result};

/// What is needed to map a coefficient vector back to input coordinates:
/// the dropped constant terms (already in input units) and the arc length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub x0: f64,
    pub y0: f64,
    pub length: f64,
}

/// The `2d` numbers describing one symbol: coefficients 1..=d of the x and y
/// series (the constant terms are dropped, which centres the symbol).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolCoeffs {
    pub label: Option<String>,
    pub basis_id: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Frame>,
}

impl SymbolCoeffs {
    pub fn degree(&self) -> usize {
        self.xs.len()
    }
}

/// Projects both coordinate curves onto `basis` and drops the constant terms.
pub fn to_coeffs(trace: &NormalizedTrace, basis: &OrthoBasis) -> Result<SymbolCoeffs> {
    if basis.degree() < 1 {
        return Err(Error::Invalid("coefficient vectors need degree >= 1".into()));
    }
    let cx = project(&trace.cx, basis)?;
    let cy = project(&trace.cy, basis)?;
    let origin = trace.to_input_frame(cx[0], cy[0]);
    Ok(SymbolCoeffs {
        label: trace.label.clone(),
        basis_id: basis.id(),
        xs: cx[1..].to_vec(),
        ys: cy[1..].to_vec(),
        frame: Some(Frame {
            x0: origin.x,
            y0: origin.y,
            length: trace.total_length,
        }),
    })
}

pub fn write_coeffs_jsonl<W: Write>(mut out: W, items: &[SymbolCoeffs]) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_coeffs_jsonl<R: BufRead>(reader: R) -> Result<Vec<SymbolCoeffs>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        out.push(item);
    }
    Ok(out)
}
