//! Arc-length reparameterization onto `[-1, 1]`.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::trace::{InkTrace, Point};
use crate::error::{Error, Result};
use crate::poly::PiecewisePoly;
use crate::spline;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplineOrder {
    #[default]
    Linear,
    Cubic,
}

impl FromStr for SplineOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SplineOrder::Linear),
            "cubic" => Ok(SplineOrder::Cubic),
            _ => Err(Error::Invalid(format!("unknown spline order '{s}'"))),
        }
    }
}

/// A trace as a pair of splines over normalized arc length `s ∈ [-1, 1]`.
///
/// Coordinates are taken relative to the first sample and scaled by `2/L`,
/// so the curve has total length 2 and (for linear splines) unit speed.
#[derive(Clone, Debug)]
pub struct NormalizedTrace {
    pub cx: PiecewisePoly,
    pub cy: PiecewisePoly,
    pub knots: Vec<f64>,
    /// Arc length before normalization, in input units.
    pub total_length: f64,
    /// First input sample; the normalized frame is centred here.
    pub origin: Point,
    pub spline: SplineOrder,
    pub label: Option<String>,
}

impl NormalizedTrace {
    /// Maps a normalized-frame point back to input coordinates.
    pub fn to_input_frame(&self, x: f64, y: f64) -> Point {
        let k = 0.5 * self.total_length;
        Point::new(self.origin.x + k * x, self.origin.y + k * y)
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        (self.cx.eval(s), self.cy.eval(s))
    }
}

/// 8-point Gauss-Legendre rule on [-1, 1].
fn gauss_legendre_8() -> &'static ([f64; 8], [f64; 8]) {
    static RULE: OnceLock<([f64; 8], [f64; 8])> = OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 8;
        let mut nodes = [0.0; N];
        let mut weights = [0.0; N];
        for i in 0..N {
            let mut x = (PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..50 {
                // P_N and P_{N-1} by recurrence
                let (mut p0, mut p1) = (1.0, x);
                for k in 1..N {
                    let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn gauss8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre_8();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Cumulative arc length at each sample along the interpolating spline.
fn cumulative_lengths(points: &[Point], order: SplineOrder) -> Result<Vec<f64>> {
    let mut chord = Vec::with_capacity(points.len());
    chord.push(0.0);
    for w in points.windows(2) {
        chord.push(chord.last().unwrap() + w[0].dist(w[1]));
    }
    match order {
        SplineOrder::Linear => Ok(chord),
        SplineOrder::Cubic => {
            // natural cubic splines in chord-length parameter, then true length
            let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
            let sx = spline::natural_cubic_local(&chord, &xs)?;
            let sy = spline::natural_cubic_local(&chord, &ys)?;
            let mut out = Vec::with_capacity(points.len());
            out.push(0.0);
            for w in chord.windows(2) {
                let speed = |t: f64| sx.eval_derivative(t).hypot(sy.eval_derivative(t));
                out.push(out.last().unwrap() + gauss8(speed, w[0], w[1]));
            }
            Ok(out)
        }
    }
}

/// Builds the arc-length parameterized, size-normalized curve of a trace.
pub fn arc_length_normalize(trace: &InkTrace, order: SplineOrder) -> Result<NormalizedTrace> {
    let points = trace.points();
    if points.len() < 2 {
        return Err(Error::DegenerateTrace);
    }
    let cum = cumulative_lengths(points, order)?;
    let total = *cum.last().unwrap();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegenerateTrace);
    }
    let n = points.len();
    let mut knots: Vec<f64> = cum.iter().map(|c| -1.0 + 2.0 * c / total).collect();
    knots[0] = -1.0;
    knots[n - 1] = 1.0;
    if knots.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(
            "samples too close together to separate in arc length".into(),
        ));
    }

    let origin = points[0];
    let scale = 2.0 / total;
    let xs: Vec<f64> = points.iter().map(|p| (p.x - origin.x) * scale).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.y - origin.y) * scale).collect();
    let (cx, cy) = match order {
        SplineOrder::Linear => (spline::linear(&knots, &xs)?, spline::linear(&knots, &ys)?),
        SplineOrder::Cubic => (
            spline::natural_cubic(&knots, &xs)?,
            spline::natural_cubic(&knots, &ys)?,
        ),
    };
    Ok(NormalizedTrace {
        cx,
        cy,
        knots,
        total_length: total,
        origin,
        spline: order,
        label: trace.label.clone(),
    })
}
