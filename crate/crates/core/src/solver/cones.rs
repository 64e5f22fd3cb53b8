//! Cone kernels for the interior-point method: Nesterov–Todd scalings,
//! Jordan-algebra products, and boundary step lengths for the
//! nonnegative orthant and second-order cone blocks.

/// Canonical cone of the internal form (rotated blocks are rotated into
/// plain second-order cones during conversion).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Cone {
    Nonneg(usize),
    Soc(usize),
}

impl Cone {
    pub fn len(&self) -> usize {
        match *self {
            Cone::Nonneg(l) | Cone::Soc(l) => l,
        }
    }

    /// Contribution to the barrier degree nu.
    pub fn degree(&self) -> usize {
        match *self {
            Cone::Nonneg(l) => l,
            Cone::Soc(_) => 1,
        }
    }
}

pub(crate) fn total_len(cones: &[Cone]) -> usize {
    cones.iter().map(Cone::len).sum()
}

pub(crate) fn total_degree(cones: &[Cone]) -> usize {
    cones.iter().map(Cone::degree).sum()
}

/// The unit element `e` of the product cone.
pub(crate) fn unit_e(cones: &[Cone]) -> Vec<f64> {
    let mut e = Vec::with_capacity(total_len(cones));
    for c in cones {
        match *c {
            Cone::Nonneg(l) => e.extend(std::iter::repeat(1.0).take(l)),
            Cone::Soc(l) => {
                e.push(1.0);
                e.extend(std::iter::repeat(0.0).take(l - 1));
            }
        }
    }
    e
}

/// One block's Nesterov–Todd scaling point.
#[derive(Clone, Debug)]
pub(crate) enum Scaling {
    /// `W = diag(w)`, `w_i = sqrt(s_i / z_i)`.
    Diag(Vec<f64>),
    /// `W = eta * Wbar`, `Wbar` the reflection matrix of the unit
    /// hyperbolic vector `wbar`.
    SocNT { eta: f64, wbar: Vec<f64> },
}

fn soc_residual(u: &[f64]) -> f64 {
    u[0] * u[0] - u[1..].iter().map(|v| v * v).sum::<f64>()
}

/// Compute the NT scaling for every block; `None` when an iterate has
/// left the cone interior beyond numerical rescue.
pub(crate) fn compute_scaling(cones: &[Cone], s: &[f64], z: &[f64]) -> Option<Vec<Scaling>> {
    let mut out = Vec::with_capacity(cones.len());
    let mut off = 0;
    for c in cones {
        let l = c.len();
        let (sb, zb) = (&s[off..off + l], &z[off..off + l]);
        match c {
            Cone::Nonneg(_) => {
                let mut w = Vec::with_capacity(l);
                for i in 0..l {
                    if sb[i] <= 0.0 || zb[i] <= 0.0 {
                        return None;
                    }
                    w.push((sb[i] / zb[i]).sqrt());
                }
                out.push(Scaling::Diag(w));
            }
            Cone::Soc(_) => {
                let rs = soc_residual(sb);
                let rz = soc_residual(zb);
                if rs <= 0.0 || rz <= 0.0 || sb[0] <= 0.0 || zb[0] <= 0.0 {
                    return None;
                }
                let (rs_sqrt, rz_sqrt) = (rs.sqrt(), rz.sqrt());
                let sbar: Vec<f64> = sb.iter().map(|v| v / rs_sqrt).collect();
                let zbar: Vec<f64> = zb.iter().map(|v| v / rz_sqrt).collect();
                let dot: f64 = sbar.iter().zip(&zbar).map(|(a, b)| a * b).sum();
                let gamma = ((1.0 + dot) / 2.0).sqrt();
                // wbar = (sbar + J zbar) / (2 gamma), J = diag(1, -I).
                let mut wbar = Vec::with_capacity(l);
                wbar.push((sbar[0] + zbar[0]) / (2.0 * gamma));
                for i in 1..l {
                    wbar.push((sbar[i] - zbar[i]) / (2.0 * gamma));
                }
                let eta = (rs / rz).powf(0.25);
                out.push(Scaling::SocNT { eta, wbar });
            }
        }
        off += l;
    }
    Some(out)
}

fn apply_wbar(wbar: &[f64], v: &[f64], out: &mut [f64]) {
    // Wbar = [w0, w1'; w1, I + w1 w1'/(1+w0)]
    let w0 = wbar[0];
    let dot1: f64 = wbar[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum();
    out[0] = w0 * v[0] + dot1;
    let coef = v[0] + dot1 / (1.0 + w0);
    for i in 1..v.len() {
        out[i] = v[i] + coef * wbar[i];
    }
}

fn apply_wbar_inv(wbar: &[f64], v: &[f64], out: &mut [f64]) {
    // Wbar^-1 = [w0, -w1'; -w1, I + w1 w1'/(1+w0)] (unit hyperbolic wbar).
    let w0 = wbar[0];
    let dot1: f64 = wbar[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum();
    out[0] = w0 * v[0] - dot1;
    let coef = -v[0] + dot1 / (1.0 + w0);
    for i in 1..v.len() {
        out[i] = v[i] + coef * wbar[i];
    }
}

/// `W v`, blockwise.
pub(crate) fn apply_w(cones: &[Cone], scalings: &[Scaling], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    let mut off = 0;
    for (c, sc) in cones.iter().zip(scalings) {
        let l = c.len();
        match sc {
            Scaling::Diag(w) => {
                for i in 0..l {
                    out[off + i] = w[i] * v[off + i];
                }
            }
            Scaling::SocNT { eta, wbar } => {
                apply_wbar(wbar, &v[off..off + l], &mut out[off..off + l]);
                for i in 0..l {
                    out[off + i] *= eta;
                }
            }
        }
        off += l;
    }
    out
}

/// `W^{-1} v`, blockwise.
pub(crate) fn apply_winv(cones: &[Cone], scalings: &[Scaling], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    let mut off = 0;
    for (c, sc) in cones.iter().zip(scalings) {
        let l = c.len();
        match sc {
            Scaling::Diag(w) => {
                for i in 0..l {
                    out[off + i] = v[off + i] / w[i];
                }
            }
            Scaling::SocNT { eta, wbar } => {
                apply_wbar_inv(wbar, &v[off..off + l], &mut out[off..off + l]);
                for i in 0..l {
                    out[off + i] /= eta;
                }
            }
        }
        off += l;
    }
    out
}

/// Jordan product `a o b`, blockwise.
pub(crate) fn jordan_prod(cones: &[Cone], a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    let mut off = 0;
    for c in cones {
        let l = c.len();
        match c {
            Cone::Nonneg(_) => {
                for i in off..off + l {
                    out[i] = a[i] * b[i];
                }
            }
            Cone::Soc(_) => {
                let dot: f64 = a[off..off + l]
                    .iter()
                    .zip(&b[off..off + l])
                    .map(|(x, y)| x * y)
                    .sum();
                out[off] = dot;
                for i in 1..l {
                    out[off + i] = a[off] * b[off + i] + b[off] * a[off + i];
                }
            }
        }
        off += l;
    }
    out
}

/// Jordan division `lambda \ d` (solve `lambda o x = d`), blockwise.
pub(crate) fn jordan_div(cones: &[Cone], lambda: &[f64], d: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; d.len()];
    let mut off = 0;
    for c in cones {
        let l = c.len();
        match c {
            Cone::Nonneg(_) => {
                for i in off..off + l {
                    out[i] = d[i] / lambda[i];
                }
            }
            Cone::Soc(_) => {
                let a = lambda[off];
                let bnorm2: f64 = lambda[off + 1..off + l].iter().map(|v| v * v).sum();
                let det = a * a - bnorm2;
                let bd: f64 = lambda[off + 1..off + l]
                    .iter()
                    .zip(&d[off + 1..off + l])
                    .map(|(x, y)| x * y)
                    .sum();
                let x0 = (a * d[off] - bd) / det;
                out[off] = x0;
                for i in 1..l {
                    out[off + i] = (d[off + i] - x0 * lambda[off + i]) / a;
                }
            }
        }
        off += l;
    }
    out
}

/// Largest `alpha >= 0` with `u + alpha du` in the closed cone
/// (`f64::INFINITY` when the whole ray stays inside).
pub(crate) fn step_to_boundary(cones: &[Cone], u: &[f64], du: &[f64]) -> f64 {
    let mut alpha = f64::INFINITY;
    let mut off = 0;
    for c in cones {
        let l = c.len();
        match c {
            Cone::Nonneg(_) => {
                for i in off..off + l {
                    if du[i] < 0.0 {
                        alpha = alpha.min(-u[i] / du[i]);
                    }
                }
            }
            Cone::Soc(_) => {
                let ub = &u[off..off + l];
                let db = &du[off..off + l];
                // res(u + t du) = a t^2 + b t + c with c > 0 in the interior.
                let a = soc_residual(db);
                let b = 2.0
                    * (ub[0] * db[0]
                        - ub[1..]
                            .iter()
                            .zip(&db[1..])
                            .map(|(x, y)| x * y)
                            .sum::<f64>());
                let cc = soc_residual(ub);
                let mut block_alpha = f64::INFINITY;
                let disc = b * b - 4.0 * a * cc;
                if a.abs() < 1e-300 {
                    if b < 0.0 {
                        block_alpha = -cc / b;
                    }
                } else if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for root in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                        if root > 0.0 {
                            block_alpha = block_alpha.min(root);
                        }
                    }
                    if a < 0.0 && block_alpha.is_infinite() {
                        // Leading coefficient negative: residual must cross.
                        block_alpha = 0.0;
                    }
                }
                // The first component must stay nonnegative as well.
                if db[0] < 0.0 {
                    block_alpha = block_alpha.min(-ub[0] / db[0]);
                }
                alpha = alpha.min(block_alpha.max(0.0));
            }
        }
        off += l;
    }
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn nt_scaling_maps_s_and_z_to_lambda() {
        let cones = [Cone::Soc(3), Cone::Nonneg(2)];
        let s = [2.0, 0.3, -0.5, 1.5, 0.7];
        let z = [1.3, -0.2, 0.4, 0.2, 2.0];
        let sc = compute_scaling(&cones, &s, &z).unwrap();
        // lambda = W z must equal W^{-1} s.
        let wz = apply_w(&cones, &sc, &z);
        let winvs = apply_winv(&cones, &sc, &s);
        assert_close(&wz, &winvs, 1e-12);
        // W W^{-1} = I.
        let round = apply_w(&cones, &sc, &apply_winv(&cones, &sc, &s));
        assert_close(&round, &s, 1e-12);
    }

    #[test]
    fn jordan_identities() {
        let cones = [Cone::Soc(3)];
        let lam = [2.0, 0.5, -0.3];
        let d = [0.7, -0.1, 0.9];
        let x = jordan_div(&cones, &lam, &d);
        let back = jordan_prod(&cones, &lam, &x);
        assert_close(&back, &d, 1e-12);
    }

    #[test]
    fn boundary_step_nonneg() {
        let cones = [Cone::Nonneg(2)];
        let u = [1.0, 2.0];
        let du = [-2.0, 1.0];
        assert!((step_to_boundary(&cones, &u, &du) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn boundary_step_soc() {
        let cones = [Cone::Soc(2)];
        // u = (1, 0), du = (0, -1): boundary at alpha = 1.
        let alpha = step_to_boundary(&cones, &[1.0, 0.0], &[0.0, -1.0]);
        assert!((alpha - 1.0).abs() < 1e-12);
        // Moving inward: never leaves.
        let alpha = step_to_boundary(&cones, &[1.0, 0.0], &[1.0, 0.0]);
        assert!(alpha.is_infinite());
    }

}
