//! Lower bounds for sparse polynomials through the cone of sums of
//! nonnegative circuit polynomials (SONC), plus verifiers for the
//! neighboring certificate formats used in polynomial optimization.
//!
//! The pipeline, end to end:
//!
//! 1. [`polyalg`] — sparse multivariate polynomials over exact rationals,
//!    monomial enumeration, and exact rational linear algebra.
//! 2. [`circuit`] — circuits (even simplex vertices plus an interior
//!    point), circuit numbers, the sharp nonnegativity criterion, and
//!    candidate-circuit enumeration for a given support.
//! 3. [`socrep`] — compilation of SONC membership and the SONC
//!    lower-bound relaxation into a second-order cone program, using the
//!    Ben-Tal–Nemirovski tower for rational-weight geometric means.
//! 4. [`solver`] — a self-contained primal–dual interior-point solver for
//!    the generated cone programs.
//! 5. [`soscert`] — Gram-matrix (sum-of-squares) certificate expansion
//!    and verification, truncated-quadratic-module verification, the
//!    quadratic-form/polynomial dictionary, and the copositive split
//!    check P + N.
//! 6. [`neighborly`] — general-linear-position point configurations,
//!    vanishing polynomials, the squared witness families whose zero
//!    patterns drive extension-degree lower bounds, PSD image
//!    orthogonality, and subspace-sum reduction.
//!
//! Everything is deterministic: fixed monomial order (graded lex), fixed
//! solver initialization, seeded PRNG for sampling.

pub mod circuit;
pub(crate) mod linalg;
pub mod neighborly;
pub mod polyalg;
pub mod socrep;
pub mod solver;
pub mod soscert;

pub use circuit::{enumerate_circuits, Circuit, CircuitError, CircuitPoly};
pub use polyalg::{
    barycentric_weights, monomial_vector, space_dim, BaryError, Exponent, ParseError,
    PolyAlgError, RationalMatrix, SparsePoly,
};
pub use socrep::{
    build_lower_bound, build_membership, extract_certificate, geomean_tower, BuildResult,
    ConeBlock, ConeProgram, GeomeanFragment, SoncCertificate, SocrepError,
};
pub use solver::{check_feasibility, solve, SolveResult, SolverOptions, SolverStatus};
pub use soscert::{
    copositive_cert_verify, gram_reconstruct, module_verify, poly_to_quad, psd_check,
    quad_to_poly, sos_extract, GramCertificate, ModuleCertificate, SoscertError, SymMatrix,
};
