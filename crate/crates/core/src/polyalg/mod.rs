//! Sparse multivariate polynomial arithmetic, exponent combinatorics,
//! monomial vectors, and exact rational linear algebra.
//!
//! Coefficients are exact rationals ([`num_rational::BigRational`])
//! throughout; real-valued evaluation converts on demand. Simplex and
//! barycentric computations must be exact because the circuit
//! nonnegativity criterion is sharp at the boundary.
//!
//! The monomial order is graded lexicographic everywhere (degree first,
//! then lexicographic with `x0` before `x1`), which makes Gram bases and
//! serialized certificates reproducible.

mod exponent;
mod matrix;
mod monomials;
mod parse;
mod poly;

pub use exponent::Exponent;
pub use matrix::{barycentric_weights, BaryError, RationalMatrix};
pub use monomials::{monomial_vector, space_dim};
pub use parse::{parse_poly, parse_rational, ParseError};
pub use poly::SparsePoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Errors shared across the polynomial-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyAlgError {
    /// `binom(n+d, n)` does not fit in the platform index range.
    #[error("space dimension binom({n}+{d}, {n}) overflows the index range")]
    Overflow { n: usize, d: u32 },
    /// A vector or exponent had the wrong number of variables.
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Exact rational from an integer.
pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational equal to the given float (every finite f64 is rational).
///
/// Panics on NaN or infinity.
pub fn rat_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite float")
}

/// Round a rational to the nearest f64.
pub fn rat_to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}
