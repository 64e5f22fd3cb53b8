//! Second-order cone representation of SONC membership and of the SONC
//! lower-bound relaxation.
//!
//! The circuit criterion `f_beta >= -Theta` with
//! `Theta = prod (c_i / lambda_i)^lambda_i` is exactly the hypograph of a
//! weighted geometric mean in the (pre-scaled) vertex coefficients, and
//! rational-weight geometric means have an explicit second-order cone
//! tower of rotated cones `z^2 <= 2uv`. Membership of `f` in the SONC
//! cone is then a feasibility problem coupling per-circuit coefficient
//! vectors and monomial-square multipliers to the coefficients of `f`;
//! the lower-bound relaxation frees the constant coefficient by
//! `f_0 - lambda` and maximizes `lambda`.

mod build;
mod certificate;
mod program;
mod tower;

pub use build::{
    build_lower_bound, build_membership, extract_certificate, BuildOptions, BuildResult,
    CircuitVars, VarMap,
};
pub use certificate::SoncCertificate;
pub use program::{ConeBlock, ConeProgram, EqualitySystem, ProgramBuilder};
pub use tower::{geomean_tower, GeomeanFragment};

use crate::polyalg::Exponent;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SocrepError {
    /// No weights supplied to a geometric-mean tower.
    #[error("empty weight vector")]
    EmptyWeights,
    /// Tower weights must be positive and sum to at most 1.
    #[error("invalid geometric-mean weights: {0}")]
    InvalidWeights(String),
    /// A term of `f` can be matched by no circuit beta and no monomial
    /// square; the membership program is infeasible by structure.
    #[error("term {0} is covered by no candidate circuit and no monomial square")]
    UncoverableTerm(Exponent),
    /// The polynomial degree exceeds the declared 2d.
    #[error("polynomial degree {deg} exceeds the declared bound {two_d}")]
    DegreeTooHigh { deg: i64, two_d: u32 },
    /// Mixed variable counts.
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// The solution handed to certificate extraction is not primal
    /// feasible at the stated tolerance.
    #[error("solution is not primal feasible at tolerance {tol}: residual {residual}")]
    SolutionNotFeasible { residual: f64, tol: f64 },
    /// The extracted certificate does not reproduce `f - lambda` within
    /// the residual budget.
    #[error("certificate residual {residual} exceeds the budget {budget}{detail}")]
    ResidualTooLarge {
        residual: f64,
        budget: f64,
        detail: String,
    },
}
