//! Exact Laurent-polynomial and rational-function arithmetic, plus maps
//! built from them.

mod gcd;
mod map;
mod parse;
mod poly;
mod ratfunc;
mod scalar;

pub use gcd::gcd;
pub use map::{BirationalMap, MonomialMap, SymbolicJacobian};
pub use parse::{max_variable_index, parse_rational_function};
pub use poly::{Exponent, LaurentPoly};
pub use ratfunc::{format_monomial, RationalFunction};
pub use scalar::{bits_for_digits, parse_rational, Real, Scalar};
