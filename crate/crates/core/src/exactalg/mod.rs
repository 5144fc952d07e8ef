//! Exact Laurent-polynomial and rational-function arithmetic over the
//! rationals, with a numeric complex backend.

mod bigfloat;
mod gcd;
mod parse;
mod poly;
mod ratfunc;
mod roots;
mod scalar;
mod serial;
mod var;

pub use bigfloat::{cos_sin, pi, BigComplex, BigFloat, MIN_PRECISION};
pub use gcd::gcd;
pub use parse::{parse_poly, parse_rf};
pub use poly::{grlex_cmp, LaurentPoly, Mono, Rat};
pub use ratfunc::{rf_reduce, rf_substitute, RationalFunction};
pub use roots::{
    eval_poly, eval_rf, poly_roots_numeric, rational_point, specialize_in, CertifiedRoot,
    Specialization,
};
pub use scalar::{format_rational, parse_rational, Scalar, DEFAULT_PRECISION};
pub(crate) use scalar::{deserialize_wire, ScalarWire};
pub use var::Var;

