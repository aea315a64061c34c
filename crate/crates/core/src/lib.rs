//! Handwritten ink as truncated orthogonal-series plane curves.
//!
//! An ink trace is reparameterized by arc length onto `[-1, 1]`, each
//! coordinate is projected onto a degree-graded orthogonal family (Legendre,
//! Chebyshev, or their first-order Sobolev variants) and the resulting
//! coefficient vectors are compared directly: with an orthogonal basis the
//! squared curve distance is a diagonally weighted sum of squared coefficient
//! differences, independent of how many points were sampled.
//!
//! Layout:
//!
//! - [`poly`]: classical-basis polynomials, Clenshaw evaluation, conversion,
//!   differentiation and closed-form weighted moments.
//! - [`spline`]: linear and natural cubic interpolating splines.
//! - [`basis`]: inner products and Gram-Schmidt construction of the
//!   orthogonal families, projection and synthesis.
//! - [`ink`]: trace ingestion (UCI pendigits, InkML), arc-length
//!   normalization and coefficient extraction.
//! - [`classify`]: coefficient-space distance, representation error,
//!   nearest-model matching and kNN evaluation.
//! - [`cli`]: the `inkbasis` command-line front end.

pub mod basis;
pub mod classify;
pub mod cli;
pub mod error;
pub mod ink;
pub mod poly;
pub mod spline;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
#[allow(dead_code)]
pub(crate) mod oracle;

pub use basis::{
    build_basis, inner_closed_form, project, synthesize, BasisKind, InnerProductSpec, OrthoBasis,
};
pub use classify::{
    accuracy_sweep, coeff_distance_sq, knn_classify, match_symbol, representation_error,
    LabeledDataset, Match, SweepConfig, SweepTable,
};
pub use error::{Error, Result};
pub use ink::{
    arc_length_normalize, parse_inkml, parse_pendigits, to_coeffs, InkTrace, NormalizedTrace,
    Point, SplineOrder, SymbolCoeffs,
};
pub use poly::{Classical, DensePoly, PiecewisePoly, Weight};

/// Default Sobolev weight λ.
pub const DEFAULT_LAMBDA: f64 = 0.125;
/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 10;
