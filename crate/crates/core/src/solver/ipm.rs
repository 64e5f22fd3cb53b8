use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cones::{self, Cone, Scaling};
use crate::linalg::{lu_factor, DMat, Lu};
use crate::socrep::{ConeBlock, ConeProgram};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Convergence tolerance on the primal/dual/gap residuals.
    pub tol: f64,
    pub max_iter: usize,
    /// Write a fixed-width iteration log to standard error.
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iter: 200,
            verbose: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
    Numerical,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolverStatus,
    /// Optimal point (status `Optimal`) or improving ray (status
    /// `Unbounded`), in the original variable indexing.
    pub primal: Vec<f64>,
    /// Stacked equality and cone multipliers `[y; z]`; the Farkas ray on
    /// status `Infeasible`.
    pub dual: Vec<f64>,
    /// Objective value in the program's maximize convention.
    pub objective: f64,
    pub iterations: usize,
    pub residuals: Residuals,
    /// Indices of zero equality rows pruned before the solve.
    pub pruned_rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("ill-formed program: {0}")]
    IllFormedProgram(String),
}

/// Per-constraint violation report for a candidate point.
#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// `|a_i x - b_i|` per equality row.
    pub eq_violations: Vec<f64>,
    /// Cone membership margin per block (nonnegative inside): minimum
    /// entry for orthant blocks, `z - ||u||` for second-order blocks,
    /// `min(u, v, 2uv - ||z||^2)` for rotated blocks.
    pub cone_margins: Vec<f64>,
    pub worst_eq_violation: f64,
    pub worst_cone_margin: f64,
}

/// Violations of `point` against the program's equalities and cone
/// blocks, at the given tolerance.
pub fn check_feasibility(prog: &ConeProgram, point: &[f64], tol: f64) -> FeasibilityReport {
    assert_eq!(point.len(), prog.nvar, "point dimension mismatch");
    let mut lhs = vec![0.0; prog.equalities.rows];
    for &(r, c, v) in &prog.equalities.triplets {
        lhs[r] += v * point[c];
    }
    let eq_violations: Vec<f64> = lhs
        .iter()
        .zip(&prog.equalities.rhs)
        .map(|(l, r)| (l - r).abs())
        .collect();
    let cone_margins: Vec<f64> = prog
        .cones
        .iter()
        .map(|block| match block {
            ConeBlock::Nonneg { vars } => vars
                .iter()
                .map(|&v| point[v])
                .fold(f64::INFINITY, f64::min),
            ConeBlock::Soc { vars } => {
                let norm = vars[1..]
                    .iter()
                    .map(|&v| point[v] * point[v])
                    .sum::<f64>()
                    .sqrt();
                point[vars[0]] - norm
            }
            ConeBlock::RotatedSoc { vars } => {
                let (u, v) = (point[vars[0]], point[vars[1]]);
                let znorm2: f64 = vars[2..].iter().map(|&w| point[w] * point[w]).sum();
                u.min(v).min(2.0 * u * v - znorm2)
            }
        })
        .collect();
    let worst_eq_violation = eq_violations.iter().copied().fold(0.0, f64::max);
    let worst_cone_margin = cone_margins.iter().copied().fold(f64::INFINITY, f64::min);
    FeasibilityReport {
        feasible: worst_eq_violation <= tol && worst_cone_margin >= -tol,
        eq_violations,
        cone_margins,
        worst_eq_violation,
        worst_cone_margin,
    }
}

struct Conic {
    n: usize,
    p: usize,
    m: usize,
    /// Minimize convention: `c = -objective`.
    c: Vec<f64>,
    a: DMat,
    b: Vec<f64>,
    g: DMat,
    h: Vec<f64>,
    cones: Vec<Cone>,
    pruned_rows: Vec<usize>,
    /// A pruned zero row had a nonzero right-hand side.
    trivially_infeasible: bool,
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn convert(prog: &ConeProgram) -> Conic {
    let n = prog.nvar;

    // Dense equality matrix with zero rows pruned.
    let rows = prog.equalities.rows;
    let mut full = DMat::zeros(rows, n);
    for &(r, c, v) in &prog.equalities.triplets {
        full.add(r, c, v);
    }
    let mut keep = Vec::new();
    let mut pruned_rows = Vec::new();
    let mut trivially_infeasible = false;
    for r in 0..rows {
        let zero = (0..n).all(|c| full.get(r, c) == 0.0);
        if zero {
            pruned_rows.push(r);
            if prog.equalities.rhs[r].abs() > 0.0 {
                trivially_infeasible = true;
            }
        } else {
            keep.push(r);
        }
    }
    let p = keep.len();
    let mut a = DMat::zeros(p, n);
    let mut b = vec![0.0; p];
    for (new_r, &r) in keep.iter().enumerate() {
        for c in 0..n {
            a.set(new_r, c, full.get(r, c));
        }
        b[new_r] = prog.equalities.rhs[r];
    }

    let m: usize = prog.cones.iter().map(|blk| blk.vars().len()).sum();
    let mut g = DMat::zeros(m, n);
    let mut cones = Vec::with_capacity(prog.cones.len());
    let mut row = 0;
    for block in &prog.cones {
        match block {
            ConeBlock::Nonneg { vars } => {
                for &v in vars {
                    g.set(row, v, -1.0);
                    row += 1;
                }
                cones.push(Cone::Nonneg(vars.len()));
            }
            ConeBlock::Soc { vars } => {
                for &v in vars {
                    g.set(row, v, -1.0);
                    row += 1;
                }
                cones.push(Cone::Soc(vars.len()));
            }
            ConeBlock::RotatedSoc { vars } => {
                // s0 = (u+v)/sqrt2, s1 = (u-v)/sqrt2, s_j = z_j: then
                // s in SOC  <=>  2uv >= ||z||^2, u, v >= 0.
                g.set(row, vars[0], -FRAC_1_SQRT_2);
                g.set(row, vars[1], -FRAC_1_SQRT_2);
                g.set(row + 1, vars[0], -FRAC_1_SQRT_2);
                g.set(row + 1, vars[1], FRAC_1_SQRT_2);
                row += 2;
                for &v in &vars[2..] {
                    g.set(row, v, -1.0);
                    row += 1;
                }
                cones.push(Cone::Soc(vars.len()));
            }
        }
    }

    let mut c = vec![0.0; n];
    for &(v, coef) in &prog.objective {
        c[v] -= coef; // maximize -> minimize
    }

    Conic {
        n,
        p,
        m,
        c,
        a,
        b,
        g,
        h: vec![0.0; m],
        cones,
        pruned_rows,
        trivially_infeasible,
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// KKT system with static regularization and iterative refinement
/// against the unregularized matrix.
struct Kkt {
    dim: usize,
    unreg: DMat,
    lu: Lu,
}

impl Kkt {
    fn assemble(cx: &Conic, scalings: &[Scaling], delta: f64) -> Result<Kkt, SolverError> {
        let (n, p, m) = (cx.n, cx.p, cx.m);
        let dim = n + p + m;
        let mut k = DMat::zeros(dim, dim);
        for r in 0..p {
            for c in 0..n {
                let v = cx.a.get(r, c);
                if v != 0.0 {
                    k.set(n + r, c, v);
                    k.set(c, n + r, v);
                }
            }
        }
        for r in 0..m {
            for c in 0..n {
                let v = cx.g.get(r, c);
                if v != 0.0 {
                    k.set(n + p + r, c, v);
                    k.set(c, n + p + r, v);
                }
            }
        }
        // -W^2 block, built columnwise through the scaling operators.
        let mut unit = vec![0.0; m];
        for j in 0..m {
            unit[j] = 1.0;
            let w2 = cones::apply_w(
                &cx.cones,
                scalings,
                &cones::apply_w(&cx.cones, scalings, &unit),
            );
            for i in 0..m {
                if w2[i] != 0.0 {
                    k.set(n + p + i, n + p + j, -w2[i]);
                }
            }
            unit[j] = 0.0;
        }
        // The static regularization must not scale with the NT blocks,
        // whose entries blow up as the gap collapses.
        let unreg = k.clone();
        for i in 0..dim {
            if i < n {
                k.add(i, i, delta);
            } else {
                k.add(i, i, -delta);
            }
        }
        let lu = lu_factor(k).map_err(|_| {
            SolverError::IllFormedProgram("singular KKT system".into())
        })?;
        Ok(Kkt { dim, unreg, lu })
    }

    /// Solve with iterative refinement against the unregularized K.
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.lu.solve(&mut x);
        let mut kx = vec![0.0; self.dim];
        for _ in 0..3 {
            self.unreg.mul_vec(&x, &mut kx);
            let mut r: Vec<f64> = rhs.iter().zip(&kx).map(|(b, v)| b - v).collect();
            self.lu.solve(&mut r);
            for (xi, ri) in x.iter_mut().zip(&r) {
                *xi += ri;
            }
        }
        x
    }
}

/// Solve a [`ConeProgram`] (maximize convention).
pub fn solve(prog: &ConeProgram, opts: &SolverOptions) -> Result<SolveResult, SolverError> {
    prog.validate().map_err(SolverError::IllFormedProgram)?;
    let cx = convert(prog);
    if cx.trivially_infeasible {
        return Ok(SolveResult {
            status: SolverStatus::Infeasible,
            primal: vec![0.0; cx.n],
            dual: vec![0.0; cx.p + cx.m],
            objective: f64::NEG_INFINITY,
            iterations: 0,
            residuals: Residuals::default(),
            pruned_rows: cx.pruned_rows,
        });
    }
    run(cx, opts)
}

#[allow(clippy::too_many_lines)]
fn run(cx: Conic, opts: &SolverOptions) -> Result<SolveResult, SolverError> {
    let (n, p, m) = (cx.n, cx.p, cx.m);
    let nu = cones::total_degree(&cx.cones) as f64;
    let e = cones::unit_e(&cx.cones);
    let data_norm = 1.0f64
        .max(inf_norm(&cx.c))
        .max(inf_norm(&cx.b))
        .max(inf_norm(&cx.a.a))
        .max(inf_norm(&cx.g.a))
        .max(inf_norm(&cx.h));

    let mut x = vec![0.0; n];
    let mut y = vec![0.0; p];
    let mut z = e.clone();
    let mut s = e.clone();
    let mut tau = 1.0f64;
    let mut kappa = 1.0f64;

    #[allow(unused_assignments)]
    let mut residuals = Residuals::default();
    let mut stalls = 0usize;

    if opts.verbose {
        eprintln!(
            "{:>4} {:>13} {:>13} {:>10} {:>10} {:>10} {:>8}",
            "iter", "pcost", "dcost", "gap", "pres", "dres", "step"
        );
    }

    let mut at_y = vec![0.0; n];
    let mut gt_z = vec![0.0; n];
    let mut ax = vec![0.0; p];
    let mut gx = vec![0.0; m];

    for iter in 0..=opts.max_iter {
        // Residuals of the homogeneous embedding.
        mul_t(&cx.a, &y, &mut at_y);
        mul_t(&cx.g, &z, &mut gt_z);
        cx.a.mul_vec(&x, &mut ax);
        cx.g.mul_vec(&x, &mut gx);

        let hx: Vec<f64> = (0..n)
            .map(|i| at_y[i] + gt_z[i] + cx.c[i] * tau)
            .collect();
        let hy: Vec<f64> = (0..p).map(|i| ax[i] - cx.b[i] * tau).collect();
        let hz: Vec<f64> = (0..m).map(|i| s[i] + gx[i] - cx.h[i] * tau).collect();
        let htau = kappa + dot(&cx.c, &x) + dot(&cx.b, &y) + dot(&cx.h, &z);

        let gap = dot(&s, &z);
        let mu = (gap + tau * kappa) / (nu + 1.0);
        if !mu.is_finite() || tau <= 0.0 || kappa <= 0.0 {
            return Ok(finish_unconverged(
                SolverStatus::Numerical,
                cx,
                x,
                y,
                z,
                tau.max(1e-300),
                iter,
                residuals,
            ));
        }

        // Scaled-back candidate and its convergence measures.
        let pcost_min = dot(&cx.c, &x) / tau;
        let dcost_min = -(dot(&cx.b, &y) + dot(&cx.h, &z)) / tau;
        let mut pres = 0.0f64;
        if p > 0 {
            let r: f64 = (0..p).map(|i| (ax[i] / tau - cx.b[i]).abs()).fold(0.0, f64::max);
            pres = pres.max(r / (1.0 + inf_norm(&cx.b)));
        }
        if m > 0 {
            let r: f64 = (0..m)
                .map(|i| (gx[i] / tau + s[i] / tau - cx.h[i]).abs())
                .fold(0.0, f64::max);
            pres = pres.max(r / (1.0 + inf_norm(&cx.h)));
        }
        let dres = (0..n)
            .map(|i| (at_y[i] / tau + gt_z[i] / tau + cx.c[i]).abs())
            .fold(0.0, f64::max)
            / (1.0 + inf_norm(&cx.c));
        let gap_abs = gap / (tau * tau);
        let gapres = gap_abs / (1.0 + pcost_min.abs().max(dcost_min.abs()));
        residuals = Residuals {
            primal: pres,
            dual: dres,
            gap: gapres,
        };

        if opts.verbose {
            eprintln!(
                "{:>4} {:>13.5e} {:>13.5e} {:>10.2e} {:>10.2e} {:>10.2e} {:>8}",
                iter, -pcost_min, -dcost_min, gapres, pres, dres, ""
            );
        }

        if pres <= opts.tol && dres <= opts.tol && gapres <= opts.tol {
            let inv_tau = 1.0 / tau;
            let primal: Vec<f64> = x.iter().map(|v| v * inv_tau).collect();
            let mut dual: Vec<f64> = y.iter().map(|v| v * inv_tau).collect();
            dual.extend(z.iter().map(|v| v * inv_tau));
            return Ok(SolveResult {
                status: SolverStatus::Optimal,
                objective: -pcost_min,
                primal,
                dual,
                iterations: iter,
                residuals,
                pruned_rows: cx.pruned_rows,
            });
        }

        // Farkas-type improving-ray certificates, gated on the embedding
        // tipping toward tau = 0.
        let loose = stalls >= 2 || iter == opts.max_iter;
        let inf_tol = if loose { opts.tol.max(1e-6) } else { opts.tol };
        if tau <= 1e-3 * kappa || loose {
            let rho = -(dot(&cx.b, &y) + dot(&cx.h, &z));
            if rho > 0.0 {
                let cert_res: f64 = (0..n).map(|i| (at_y[i] + gt_z[i]).abs()).fold(0.0, f64::max);
                if cert_res <= inf_tol * rho * data_norm {
                    let inv = 1.0 / rho;
                    let mut dual: Vec<f64> = y.iter().map(|v| v * inv).collect();
                    dual.extend(z.iter().map(|v| v * inv));
                    return Ok(SolveResult {
                        status: SolverStatus::Infeasible,
                        objective: f64::NEG_INFINITY,
                        primal: x,
                        dual,
                        iterations: iter,
                        residuals,
                        pruned_rows: cx.pruned_rows,
                    });
                }
            }
            let sigma = -dot(&cx.c, &x);
            if sigma > 0.0 {
                let ray_eq = inf_norm(&ax);
                let ray_cone: f64 = (0..m).map(|i| (gx[i] + s[i]).abs()).fold(0.0, f64::max);
                if ray_eq <= inf_tol * sigma * data_norm && ray_cone <= inf_tol * sigma * data_norm
                {
                    let inv = 1.0 / sigma;
                    return Ok(SolveResult {
                        status: SolverStatus::Unbounded,
                        objective: f64::INFINITY,
                        primal: x.iter().map(|v| v * inv).collect(),
                        dual: vec![0.0; p + m],
                        iterations: iter,
                        residuals,
                        pruned_rows: cx.pruned_rows,
                    });
                }
            }
        }
        if iter == opts.max_iter {
            return Ok(finish_unconverged(SolverStatus::MaxIter, cx, x, y, z, tau, iter, residuals));
        }
        if stalls >= 2 {
            return Ok(finish_unconverged(SolverStatus::Numerical, cx, x, y, z, tau, iter, residuals));
        }

        let Some(scalings) = cones::compute_scaling(&cx.cones, &s, &z) else {
            return Ok(finish_unconverged(SolverStatus::Numerical, cx, x, y, z, tau, iter, residuals));
        };
        let lambda = cones::apply_w(&cx.cones, &scalings, &z);
        let Ok(kkt) = Kkt::assemble(&cx, &scalings, 1e-13 * data_norm) else {
            return Ok(finish_unconverged(
                SolverStatus::Numerical,
                cx,
                x,
                y,
                z,
                tau,
                iter,
                residuals,
            ));
        };

        // Static solve for the tau elimination: K u1 = (-c, b, h).
        let mut g1 = Vec::with_capacity(n + p + m);
        g1.extend(cx.c.iter().map(|v| -v));
        g1.extend_from_slice(&cx.b);
        g1.extend_from_slice(&cx.h);
        let u1 = kkt.solve(&g1);
        let psi1 = dot(&cx.c, &u1[..n]) + dot(&cx.b, &u1[n..n + p]) + dot(&cx.h, &u1[n + p..]);

        let solve_direction = |ds_target: &[f64], dtk_target: f64, sigma: f64| {
            let lam_div = cones::jordan_div(&cx.cones, &lambda, ds_target);
            let w_lamdiv = cones::apply_w(&cx.cones, &scalings, &lam_div);
            let mut rhs = Vec::with_capacity(n + p + m);
            rhs.extend(hx.iter().map(|v| -(1.0 - sigma) * v));
            rhs.extend(hy.iter().map(|v| -(1.0 - sigma) * v));
            rhs.extend(
                hz.iter()
                    .zip(&w_lamdiv)
                    .map(|(r, w)| -(1.0 - sigma) * r - w),
            );
            let u2 = kkt.solve(&rhs);
            let psi2 =
                dot(&cx.c, &u2[..n]) + dot(&cx.b, &u2[n..n + p]) + dot(&cx.h, &u2[n + p..]);
            let rhs4 = -(1.0 - sigma) * htau - dtk_target / tau;
            let dtau = (rhs4 - psi2) / (psi1 - kappa / tau);
            let dx: Vec<f64> = (0..n).map(|i| u2[i] + dtau * u1[i]).collect();
            let dy: Vec<f64> = (0..p).map(|i| u2[n + i] + dtau * u1[n + i]).collect();
            let dz: Vec<f64> = (0..m)
                .map(|i| u2[n + p + i] + dtau * u1[n + p + i])
                .collect();
            // ds = W(lambda \ ds_target) - W^2 dz
            let wdz = cones::apply_w(&cx.cones, &scalings, &dz);
            let w2dz = cones::apply_w(&cx.cones, &scalings, &wdz);
            let ds: Vec<f64> = (0..m).map(|i| w_lamdiv[i] - w2dz[i]).collect();
            let dkappa = (dtk_target - kappa * dtau) / tau;
            (dx, dy, dz, ds, dtau, dkappa)
        };

        // Predictor (affine scaling) direction.
        let ds_aff_target: Vec<f64> = {
            let ll = cones::jordan_prod(&cx.cones, &lambda, &lambda);
            ll.iter().map(|v| -v).collect()
        };
        let (_dx_a, _dy_a, dz_a, ds_a, dtau_a, dkappa_a) =
            solve_direction(&ds_aff_target, -tau * kappa, 0.0);

        let mut alpha_aff = cones::step_to_boundary(&cx.cones, &s, &ds_a)
            .min(cones::step_to_boundary(&cx.cones, &z, &dz_a));
        if dtau_a < 0.0 {
            alpha_aff = alpha_aff.min(-tau / dtau_a);
        }
        if dkappa_a < 0.0 {
            alpha_aff = alpha_aff.min(-kappa / dkappa_a);
        }
        alpha_aff = alpha_aff.min(1.0);
        let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);

        // Corrector with Mehrotra second-order term.
        let winv_ds = cones::apply_winv(&cx.cones, &scalings, &ds_a);
        let w_dz = cones::apply_w(&cx.cones, &scalings, &dz_a);
        let eta = cones::jordan_prod(&cx.cones, &winv_ds, &w_dz);
        let ll = cones::jordan_prod(&cx.cones, &lambda, &lambda);
        let ds_target: Vec<f64> = (0..m)
            .map(|i| -ll[i] - eta[i] + sigma * mu * e[i])
            .collect();
        let dtk_target = -tau * kappa - dtau_a * dkappa_a + sigma * mu;
        let (dx, dy, dz, ds, dtau, dkappa) = solve_direction(&ds_target, dtk_target, sigma);

        let mut alpha = cones::step_to_boundary(&cx.cones, &s, &ds)
            .min(cones::step_to_boundary(&cx.cones, &z, &dz));
        if dtau < 0.0 {
            alpha = alpha.min(-tau / dtau);
        }
        if dkappa < 0.0 {
            alpha = alpha.min(-kappa / dkappa);
        }
        let dir_finite = dtau.is_finite()
            && dkappa.is_finite()
            && dx.iter().all(|v| v.is_finite())
            && dy.iter().all(|v| v.is_finite())
            && dz.iter().all(|v| v.is_finite())
            && ds.iter().all(|v| v.is_finite());
        let step = if dir_finite {
            (0.99 * alpha).min(1.0)
        } else {
            0.0
        };
        if !step.is_finite() || step <= 1e-9 {
            stalls += 1;
        } else {
            stalls = 0;
        }
        let step = step.max(0.0).min(1.0);
        if step == 0.0 {
            continue;
        }
        if opts.verbose {
            eprintln!("{:>68} {:>8.5}", "", step);
        }

        for i in 0..n {
            x[i] += step * dx[i];
        }
        for i in 0..p {
            y[i] += step * dy[i];
        }
        for i in 0..m {
            z[i] += step * dz[i];
            s[i] += step * ds[i];
        }
        tau += step * dtau;
        kappa += step * dkappa;
    }
    unreachable!("loop exits through a return");
}

#[allow(clippy::too_many_arguments)]
fn finish_unconverged(
    status: SolverStatus,
    cx: Conic,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    tau: f64,
    iterations: usize,
    residuals: Residuals,
) -> SolveResult {
    let inv_tau = 1.0 / tau.max(1e-300);
    let primal: Vec<f64> = x.iter().map(|v| v * inv_tau).collect();
    let objective = -dot(&cx.c, &primal);
    let mut dual: Vec<f64> = y.iter().map(|v| v * inv_tau).collect();
    dual.extend(z.iter().map(|v| v * inv_tau));
    SolveResult {
        status,
        primal,
        dual,
        objective,
        iterations,
        residuals,
        pruned_rows: cx.pruned_rows,
    }
}

/// `out = M' v`.
fn mul_t(mat: &DMat, v: &[f64], out: &mut [f64]) {
    debug_assert_eq!(v.len(), mat.rows);
    debug_assert_eq!(out.len(), mat.cols);
    out.iter_mut().for_each(|o| *o = 0.0);
    for r in 0..mat.rows {
        let vr = v[r];
        if vr == 0.0 {
            continue;
        }
        let row = &mat.a[r * mat.cols..(r + 1) * mat.cols];
        for (o, a) in out.iter_mut().zip(row) {
            *o += a * vr;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::socrep::ProgramBuilder;

    fn solve_default(prog: &ConeProgram) -> SolveResult {
        solve(prog, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn lp_sanity_lambda_bounded_by_three() {
        // max lambda s.t. lambda + slack = 3, slack >= 0.
        let mut b = ProgramBuilder::new();
        let lam = b.new_var();
        let s = b.new_slack();
        b.add_eq(&[(lam, 1.0), (s, 1.0)], 3.0);
        b.set_objective(vec![(lam, 1.0)]);
        let res = solve_default(&b.finish());
        assert_eq!(res.status, SolverStatus::Optimal);
        assert!((res.objective - 3.0).abs() < 1e-7, "{}", res.objective);
        assert!((res.primal[lam] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn rotated_cone_closed_form_sqrt2() {
        // max t s.t. 2uv >= t^2 with u = v = 1 fixed: t* = sqrt(2).
        let mut b = ProgramBuilder::new();
        let u = b.new_var();
        let v = b.new_var();
        let t = b.new_var();
        b.add_rotated(u, v, t);
        b.add_eq(&[(u, 1.0)], 1.0);
        b.add_eq(&[(v, 1.0)], 1.0);
        b.set_objective(vec![(t, 1.0)]);
        let res = solve_default(&b.finish());
        assert_eq!(res.status, SolverStatus::Optimal);
        assert!(
            (res.objective - std::f64::consts::SQRT_2).abs() < 1e-8,
            "{}",
            res.objective
        );
    }

    #[test]
    fn soc_projection_distance() {
        // max x0 + x1 over ||(x0, x1)|| <= 1 meets the boundary at
        // (1/sqrt2, 1/sqrt2): objective sqrt(2).
        let mut b = ProgramBuilder::new();
        let z = b.new_var();
        let x0 = b.new_var();
        let x1 = b.new_var();
        b.add_soc(vec![z, x0, x1]);
        b.add_eq(&[(z, 1.0)], 1.0);
        b.set_objective(vec![(x0, 1.0), (x1, 1.0)]);
        let res = solve_default(&b.finish());
        assert_eq!(res.status, SolverStatus::Optimal);
        assert!((res.objective - std::f64::consts::SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn infeasible_sign_clash() {
        // x >= 0 with x = -1.
        let mut b = ProgramBuilder::new();
        let x = b.new_slack();
        b.add_eq(&[(x, 1.0)], -1.0);
        let res = solve_default(&b.finish());
        assert_eq!(res.status, SolverStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        // max x, x free with a vacuous constraint on another variable.
        let mut b = ProgramBuilder::new();
        let x = b.new_var();
        let s = b.new_slack();
        b.add_eq(&[(s, 1.0)], 1.0);
        b.set_objective(vec![(x, 1.0)]);
        let res = solve_default(&b.finish());
        assert_eq!(res.status, SolverStatus::Unbounded);
    }

    #[test]
    fn pruned_zero_rows_reported() {
        let mut b = ProgramBuilder::new();
        let x = b.new_slack();
        b.add_eq(&[], 0.0);
        b.add_eq(&[(x, 1.0)], 2.0);
        let res = solve_default(&b.finish());
        assert_eq!(res.pruned_rows, vec![0]);
        assert_eq!(res.status, SolverStatus::Optimal);
        // Zero row with nonzero rhs is trivially infeasible.
        let mut b = ProgramBuilder::new();
        let _x = b.new_slack();
        b.add_eq(&[], 1.0);
        let res = solve_default(&b.finish());
        assert_eq!(res.status, SolverStatus::Infeasible);
    }

    #[test]
    fn feasibility_report_margins() {
        // soc block (z, u) = (1, (2, 0)): violation 1.
        let mut b = ProgramBuilder::new();
        let z = b.new_var();
        let u0 = b.new_var();
        let u1 = b.new_var();
        b.add_soc(vec![z, u0, u1]);
        let prog = b.finish();
        let rep = check_feasibility(&prog, &[1.0, 2.0, 0.0], 1e-9);
        assert!(!rep.feasible);
        assert!((rep.worst_cone_margin + 1.0).abs() < 1e-12);

        // Zero point in an all-nonneg program with zero rhs: margins 0.
        let mut b = ProgramBuilder::new();
        let v = b.new_slack();
        b.add_eq(&[(v, 1.0)], 0.0);
        let prog = b.finish();
        let rep = check_feasibility(&prog, &[0.0], 1e-9);
        assert!(rep.feasible);
        assert_eq!(rep.worst_eq_violation, 0.0);
        assert_eq!(rep.worst_cone_margin, 0.0);
    }

    #[test]
    fn deterministic_reruns() {
        let mut b = ProgramBuilder::new();
        let u = b.new_var();
        let v = b.new_var();
        let t = b.new_var();
        b.add_rotated(u, v, t);
        b.add_eq(&[(u, 1.0), (v, 1.0)], 2.0);
        b.set_objective(vec![(t, 1.0)]);
        let prog = b.finish();
        let r1 = solve_default(&prog);
        let r2 = solve_default(&prog);
        assert_eq!(r1.iterations, r2.iterations);
        assert!((r1.objective - r2.objective).abs() <= 1e-12);
    }
}
