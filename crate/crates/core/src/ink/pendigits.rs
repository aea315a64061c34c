//! UCI pen-based digits: one sample per line, 16 integer coordinates
//! (8 `x,y` pairs) followed by the class digit.

use std::io::BufRead;

use super::trace::{InkTrace, Point};
use crate::error::{Error, Result};

const FIELDS: usize = 17;

pub fn parse_pendigits<R: BufRead>(reader: R) -> Result<Vec<InkTrace>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != FIELDS {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected {FIELDS} fields, found {}", fields.len()),
            });
        }
        let mut values = [0i64; FIELDS];
        for (v, f) in values.iter_mut().zip(&fields) {
            *v = f.parse().map_err(|_| Error::Parse {
                line: line_no,
                reason: format!("'{f}' is not an integer"),
            })?;
        }
        let class = values[16];
        if !(0..=9).contains(&class) {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("class {class} is not a digit"),
            });
        }
        let points = values[..16]
            .chunks(2)
            .map(|p| Point::new(p[0] as f64, p[1] as f64));
        let trace = InkTrace::new(points, Some(class.to_string())).map_err(|e| Error::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        out.push(trace);
    }
    Ok(out)
}
