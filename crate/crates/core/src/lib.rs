//! Lower bounds on the degree of an irreducible factor of a polynomial,
//! read off the phi-Newton polygon over a discrete valuation.

pub mod bound;
pub mod diagnostics;
pub mod error;
pub mod finite_field;
pub mod harness;
pub mod parse;
pub mod poly;
pub mod polygon;
pub mod render;
pub mod valuation;

pub use bound::{
    bound_from_valuations, factor_degree_bound, legacy_bound, scan_primes, trinomial_bound, BoundInput, BoundReport,
    EdgeBound, LegacyReport, PrimeScan,
};
pub use error::{Error, Result};
pub use parse::{parse_coefficients, parse_group, parse_polynomial, parse_valuations};
pub use poly::{phi_expansion, IntPolynomial, PhiExpansion};
pub use polygon::{build_polygon, hull_oracle, NewtonPolygon};
pub use valuation::{smallest_denominator, ExtendedValue, Value, ValueGroup};
