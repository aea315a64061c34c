//! Ingestion and normalization of digital ink.

mod coeffs;
mod inkml;
mod normalize;
mod pendigits;
mod trace;

pub use coeffs::{read_coeffs_jsonl, to_coeffs, write_coeffs_jsonl, Frame, SymbolCoeffs};
pub use inkml::{parse_inkml, parse_inkml_symbols};
pub use normalize::{arc_length_normalize, NormalizedTrace, SplineOrder};
pub use pendigits::parse_pendigits;
pub use trace::{InkTrace, Point};
