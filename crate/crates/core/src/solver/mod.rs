//! Self-contained primal–dual interior-point solver for
//! [`ConeProgram`](crate::socrep::ConeProgram) instances: linear
//! objective, linear equalities, nonnegative and (rotated) second-order
//! cone blocks.
//!
//! The program is converted to the conic form
//!
//! ```text
//! min c'x   s.t.  Ax = b,  Gx + s = h,  s in K
//! ```
//!
//! with rotated blocks rotated into plain second-order cones by the
//! orthogonal map (u, v, z) -> ((u+v)/sqrt2, (u-v)/sqrt2, z), and run
//! through a homogeneous self-dual embedding with Nesterov–Todd scaling
//! and a Mehrotra predictor–corrector, factoring the dense KKT system
//! once per iteration. The embedding certifies infeasibility and
//! unboundedness through Farkas-type improving rays at relative
//! thresholds. Initialization is the unit-neutral interior point (the
//! cone unit element), not problem-scaled, so identical inputs produce
//! bitwise-identical iterates.

mod cones;
mod ipm;

pub use ipm::{
    check_feasibility, solve, FeasibilityReport, Residuals, SolveResult, SolverError,
    SolverOptions, SolverStatus,
};
