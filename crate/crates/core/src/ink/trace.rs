use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// A sampled pen trace in time order.
#[derive(Clone, Debug, PartialEq)]
pub struct InkTrace {
    points: Vec<Point>,
    pub label: Option<String>,
}

impl InkTrace {
    /// At least two samples are required. Consecutive repeated samples are
    /// collapsed, so a trace made of one repeated point keeps a single point
    /// and is later rejected as degenerate by normalization.
    pub fn new<P: Into<Point>>(points: impl IntoIterator<Item = P>, label: Option<String>) -> Result<Self> {
        let raw: Vec<Point> = points.into_iter().map(Into::into).collect();
        if raw.len() < 2 {
            return Err(Error::TooFewPoints(raw.len()));
        }
        if let Some(p) = raw.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::Invalid(format!("non-finite sample ({}, {})", p.x, p.y)));
        }
        let mut points = raw;
        points.dedup();
        Ok(Self { points, label })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Joins strokes end to end in the given order; the pen-up gap between
    /// strokes becomes a straight connecting segment.
    pub fn concat(strokes: &[InkTrace], label: Option<String>) -> Result<InkTrace> {
        InkTrace::new(strokes.iter().flat_map(|s| s.points.iter().copied()), label)
    }

    /// Applies `p -> scale * p + offset` to every sample.
    pub fn transformed(&self, scale: f64, offset: Point) -> InkTrace {
        InkTrace {
            points: self
                .points
                .iter()
                .map(|p| Point::new(scale * p.x + offset.x, scale * p.y + offset.y))
                .collect(),
            label: self.label.clone(),
        }
    }
}
