use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::certificate::SquareTerm;
use super::tower::{add_geomean_hypograph, Leaf};
use super::{ConeProgram, ProgramBuilder, SocrepError, SoncCertificate};
use crate::circuit::{Circuit, CircuitPoly};
use crate::polyalg::{rat_from_f64, rat_to_f64, Exponent, SparsePoly};
use crate::solver::SolveResult;

/// Knobs for program compilation.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Circuits whose barycentric weights have a common denominator
    /// above this are skipped: their towers would have `2^ceil(log2 q)`
    /// leaves and swamp the dense solver. Skipping candidates only
    /// weakens the relaxation, never its soundness.
    pub max_weight_denominator: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_weight_denominator: 64,
        }
    }
}

/// Where each circuit's decision variables live in the program.
#[derive(Clone, Debug)]
pub struct CircuitVars {
    pub circuit: Circuit,
    pub vertex_vars: Vec<usize>,
    pub beta_var: usize,
    /// The tower hypograph variable bounding Theta from below.
    pub theta_var: usize,
}

/// Map from program variables back to certificate structure.
#[derive(Clone, Debug, Default)]
pub struct VarMap {
    pub circuits: Vec<CircuitVars>,
    /// `(gamma, var)` for each even exponent's square multiplier.
    pub square_vars: Vec<(Exponent, usize)>,
    /// The lower-bound variable, present for relaxation programs.
    pub lambda_var: Option<usize>,
}

/// A compiled membership or lower-bound program.
#[derive(Clone, Debug)]
pub struct BuildResult {
    pub program: ConeProgram,
    pub map: VarMap,
    /// Always true: the candidate pool is restricted to support-adjacent
    /// circuits rather than the full family of admissible circuits.
    pub support_restricted: bool,
    /// Candidate circuits skipped for exceeding
    /// [`BuildOptions::max_weight_denominator`].
    pub skipped_circuits: usize,
    /// Candidate circuits dropped by dead-vertex pruning.
    pub pruned_circuits: usize,
}

/// Compile "f is a sum of nonnegative circuit polynomials over the given
/// candidate circuits plus monomial squares" into a feasibility
/// [`ConeProgram`].
///
/// Variables: per-circuit vertex coefficients `c_i` and inner
/// coefficient `c_beta`, per-even-exponent square multipliers
/// `mu_gamma >= 0`, and per-circuit hypograph variables
/// `t <= prod (c_i / lambda_i)^{lambda_i}` (the exact rational
/// pre-scaling by `1/lambda_i` is folded into the tower's copy rows).
/// Constraints: `-t <= c_beta` (plus `c_beta <= t` for odd beta) and one
/// coupling equality per exponent matching the coefficients of `f`.
pub fn build_membership(
    f: &SparsePoly,
    circuits: &[Circuit],
    opts: &BuildOptions,
) -> Result<BuildResult, SocrepError> {
    build_impl(f, circuits, false, opts)
}

/// Same as [`build_membership`] with the constant coefficient replaced
/// by `f_0 - lambda`, `lambda` free, and objective `max lambda`: the
/// SONC lower-bound relaxation.
pub fn build_lower_bound(
    f: &SparsePoly,
    circuits: &[Circuit],
    opts: &BuildOptions,
) -> Result<BuildResult, SocrepError> {
    build_impl(f, circuits, true, opts)
}

fn build_impl(
    f: &SparsePoly,
    circuits: &[Circuit],
    lower_bound: bool,
    opts: &BuildOptions,
) -> Result<BuildResult, SocrepError> {
    let nvars = f.nvars();
    for c in circuits {
        if c.nvars() != nvars {
            return Err(SocrepError::DimensionMismatch {
                expected: nvars,
                got: c.nvars(),
            });
        }
    }
    let mut used: Vec<&Circuit> = Vec::new();
    let mut skipped = 0usize;
    for c in circuits {
        match c.weight_denominator().to_u64() {
            Some(q) if q <= opts.max_weight_denominator => used.push(c),
            _ => skipped += 1,
        }
    }

    // Drop circuits with a dead vertex: an exponent with no positive
    // coefficient in f, not the (bound-shifted) constant, and not the
    // inner point of any kept circuit. The coupling rows force such a
    // vertex coefficient to zero, so the circuit can never contribute;
    // keeping it only creates a weakly infeasible direction (the bound
    // variable buying unbounded vertex mass). Dropping is exact.
    let mut pruned = 0usize;
    loop {
        let next: Vec<&Circuit> = {
            let alive = |alpha: &Exponent| {
                f.coeff(alpha).is_positive()
                    || (lower_bound && alpha.is_zero())
                    || used.iter().any(|c| c.beta() == alpha)
            };
            used.iter()
                .copied()
                .filter(|c| c.vertices().iter().all(|v| alive(v)))
                .collect()
        };
        if next.len() == used.len() {
            break;
        }
        pruned += used.len() - next.len();
        used = next;
    }

    // Structural coverage: every odd or negative coefficient of f needs
    // some circuit with that exponent as its inner point.
    for (alpha, coeff) in f.terms() {
        let needs_beta = !alpha.is_even() || coeff.is_negative();
        if needs_beta && !used.iter().any(|c| c.beta() == alpha) {
            return Err(SocrepError::UncoverableTerm(alpha.clone()));
        }
    }

    // Exponent universe: support of f, supports of all used circuits,
    // plus the constant exponent when a bound variable shifts it.
    let mut universe: BTreeSet<Exponent> = f.support().cloned().collect();
    for c in &used {
        universe.extend(c.support().cloned());
    }
    if lower_bound {
        universe.insert(Exponent::zero(nvars));
    }

    let mut builder = ProgramBuilder::new();
    let lambda_var = lower_bound.then(|| builder.new_var());

    let mut circuit_vars = Vec::with_capacity(used.len());
    for c in &used {
        let vertex_vars = builder.new_vars(c.vertices().len());
        let beta_var = builder.new_var();
        let leaves: Vec<Leaf> = vertex_vars
            .iter()
            .zip(c.weights())
            .map(|(&v, w)| Leaf::scaled(v, &w.recip()))
            .collect();
        let theta_var = add_geomean_hypograph(&mut builder, &leaves, c.weights())?;
        // -t <= c_beta, via slack: c_beta + t - s = 0.
        let s = builder.new_slack();
        builder.add_eq(&[(beta_var, 1.0), (theta_var, 1.0), (s, -1.0)], 0.0);
        if !c.beta().is_even() {
            // c_beta <= t as well.
            let s2 = builder.new_slack();
            builder.add_eq(&[(theta_var, 1.0), (beta_var, -1.0), (s2, -1.0)], 0.0);
        }
        circuit_vars.push(CircuitVars {
            circuit: (*c).clone(),
            vertex_vars,
            beta_var,
            theta_var,
        });
    }

    let mut square_vars = Vec::new();
    let mut mu_block = Vec::new();
    for gamma in universe.iter().filter(|e| e.is_even()) {
        let v = builder.new_var();
        mu_block.push(v);
        square_vars.push((gamma.clone(), v));
    }
    builder.add_nonneg(mu_block);

    for alpha in &universe {
        let mut terms: Vec<(usize, f64)> = Vec::new();
        for cv in &circuit_vars {
            for (vertex, &var) in cv.circuit.vertices().iter().zip(&cv.vertex_vars) {
                if vertex == alpha {
                    terms.push((var, 1.0));
                }
            }
            if cv.circuit.beta() == alpha {
                terms.push((cv.beta_var, 1.0));
            }
        }
        if let Some((_, var)) = square_vars.iter().find(|(g, _)| g == alpha) {
            terms.push((*var, 1.0));
        }
        if alpha.is_zero() {
            if let Some(l) = lambda_var {
                terms.push((l, 1.0));
            }
        }
        let rhs = rat_to_f64(&f.coeff(alpha));
        builder.add_eq(&terms, rhs);
    }

    if let Some(l) = lambda_var {
        builder.set_objective(vec![(l, 1.0)]);
    }

    Ok(BuildResult {
        program: builder.finish(),
        map: VarMap {
            circuits: circuit_vars,
            square_vars,
            lambda_var,
        },
        support_restricted: true,
        skipped_circuits: skipped,
        pruned_circuits: pruned,
    })
}

/// Map a solved program back to a [`SoncCertificate`].
///
/// Requires the solution to be primal feasible at tolerance 1e-7. Square
/// multipliers in `[-1e-9, 0)` are clamped to zero; inner coefficients
/// that violate the circuit bound by solver noise are pulled inside the
/// exact rational bound. The result is verified to reproduce
/// `f - bound` coefficient-wise within `1e-6 * (1 + ||f||_inf)`.
pub fn extract_certificate(
    build: &BuildResult,
    f: &SparsePoly,
    solution: &SolveResult,
) -> Result<SoncCertificate, SocrepError> {
    const FEAS_TOL: f64 = 1e-7;
    let report = crate::solver::check_feasibility(&build.program, &solution.primal, FEAS_TOL);
    if !report.feasible {
        return Err(SocrepError::SolutionNotFeasible {
            residual: report.worst_eq_violation.max(-report.worst_cone_margin),
            tol: FEAS_TOL,
        });
    }

    let scale = 1.0 + f.max_abs_coeff();
    let budget = 1e-6 * scale;
    let x = &solution.primal;
    let bound = build
        .map
        .lambda_var
        .map(|v| x[v])
        .unwrap_or(0.0);

    let mut cert = SoncCertificate::empty(f.nvars());
    cert.bound = bound;

    for cv in &build.map.circuits {
        let raw_vertex: Vec<f64> = cv.vertex_vars.iter().map(|&v| x[v]).collect();
        let raw_beta = x[cv.beta_var];
        let magnitude = raw_vertex
            .iter()
            .chain(std::iter::once(&raw_beta))
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if magnitude <= 1e-8 * scale {
            continue; // inactive circuit
        }
        let mut vertex_coeffs = Vec::with_capacity(raw_vertex.len());
        for &c in &raw_vertex {
            if c < -1e-9 * scale {
                return Err(SocrepError::ResidualTooLarge {
                    residual: -c,
                    budget: 1e-9 * scale,
                    detail: format!(": negative vertex coefficient {c}"),
                });
            }
            vertex_coeffs.push(rat_from_f64(c.max(0.0)));
        }
        let mut term = CircuitPoly::new(
            cv.circuit.clone(),
            vertex_coeffs,
            rat_from_f64(raw_beta),
        )
        .expect("coefficient count matches by construction");
        repair_beta(&mut term, budget)?;
        cert.circuit_terms.push(term);
    }

    for (gamma, var) in &build.map.square_vars {
        let mu = x[*var];
        if mu < -1e-9 * scale {
            return Err(SocrepError::ResidualTooLarge {
                residual: -mu,
                budget: 1e-9 * scale,
                detail: format!(": negative square multiplier at {gamma}"),
            });
        }
        if mu <= 1e-10 * scale {
            continue;
        }
        cert.square_terms.push(SquareTerm {
            exponent: gamma.clone(),
            coeff: rat_from_f64(mu),
        });
    }

    // Round trip: the certificate must reproduce f - bound.
    let target = {
        let shift = SparsePoly::constant(f.nvars(), rat_from_f64(bound));
        f - &shift
    };
    let diff = &cert.to_poly() - &target;
    let mut worst = 0.0f64;
    let mut worst_exp = None;
    for (e, c) in diff.terms() {
        let mag = rat_to_f64(&c.abs());
        if mag > worst {
            worst = mag;
            worst_exp = Some(e.clone());
        }
    }
    if worst > budget {
        return Err(SocrepError::ResidualTooLarge {
            residual: worst,
            budget,
            detail: worst_exp
                .map(|e| format!(" at exponent {e}"))
                .unwrap_or_default(),
        });
    }
    debug_assert!(cert.is_valid());
    Ok(cert)
}

/// Pull the inner coefficient inside the exact circuit bound when solver
/// noise leaves it marginally outside. The total perturbation allowed is
/// the certificate residual budget.
fn repair_beta(term: &mut CircuitPoly, budget: f64) -> Result<(), SocrepError> {
    if term.is_nonnegative() {
        return Ok(());
    }
    let original = term.beta_coeff().clone();
    let rebuild = |beta: BigRational| {
        CircuitPoly::new(term.circuit().clone(), term.vertex_coeffs().to_vec(), beta)
            .expect("same arity")
    };
    let shrink = BigRational::new(((1u64 << 40) - 1).into(), (1u64 << 40).into());
    let mut current = original.clone();
    for _ in 0..200 {
        current *= &shrink;
        let candidate = rebuild(current.clone());
        if candidate.is_nonnegative() {
            let moved = rat_to_f64(&(&original - &current).abs());
            if moved > budget {
                break;
            }
            *term = candidate;
            return Ok(());
        }
    }
    // Near-zero inner coefficient against a near-zero Theta: snap to 0,
    // which always satisfies the criterion when the vertices do.
    if rat_to_f64(&original.abs()) <= budget {
        let candidate = rebuild(BigRational::from_integer(0.into()));
        if candidate.is_nonnegative() {
            *term = candidate;
            return Ok(());
        }
    }
    let theta = term.circuit_number().unwrap_or(f64::NAN);
    Err(SocrepError::ResidualTooLarge {
        residual: rat_to_f64(&original.abs()) - theta,
        budget,
        detail: format!(
            ": inner coefficient {} violates the circuit bound (Theta = {theta})",
            rat_to_f64(&original)
        ),
    })
}
