//! Sum-of-squares Gram certificates and their relatives.
//!
//! A Gram certificate for `f` is a symmetric matrix `G` over the
//! graded-lex monomial basis `v` of degree at most `d` with
//! `f = v' G v`; membership of `f` in the SOS cone is *verified* here
//! (expand, compare, PSD-check), never solved for. On top of that:
//! square extraction from a pivoted LDL' factorization, truncated
//! quadratic module verification `f = sigma_0 + sum g_i sigma_i`, the
//! linear dictionary between symmetric matrices and quadratics in one
//! fewer variable, and the copositivity split `M = P + N` with `P` PSD
//! and `N` entrywise nonnegative (a complete certificate form only for
//! matrices of size at most 4).

use num_rational::BigRational;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::DMat;
use crate::polyalg::{
    monomial_vector, rat_from_f64, rat_to_f64, space_dim, Exponent, RationalMatrix, SparsePoly,
};

/// Relative PSD tolerance (scaled by `trace/k`).
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SoscertError {
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("matrix is not symmetric (asymmetry {0})")]
    NotSymmetric(f64),
    #[error("matrix must be at least 2x2")]
    SizeTooSmall,
    #[error("polynomial degree {0} exceeds 2")]
    DegreeTooHigh(i64),
    #[error("certificate structure mismatch: {0}")]
    DegreeMismatch(String),
    #[error("expected {expected} variables or size, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Symmetric matrix stored as the packed lower triangle, so symmetry is
/// exact by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    k: usize,
    lower: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(k: usize) -> Self {
        SymMatrix {
            k,
            lower: vec![0.0; k * (k + 1) / 2],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            m.set(i, i, 1.0);
        }
        m
    }

    /// From a full matrix; entries across the diagonal must agree within
    /// `1e-12` of the magnitude scale and are averaged into the packed
    /// triangle.
    pub fn from_full(full: &[Vec<f64>]) -> Result<SymMatrix, SoscertError> {
        let k = full.len();
        for row in full {
            if row.len() != k {
                return Err(SoscertError::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
        }
        let scale = full
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..=i {
                let asym = (full[i][j] - full[j][i]).abs();
                if asym > 1e-12 * (1.0 + scale) {
                    return Err(SoscertError::NotSymmetric(asym));
                }
                m.set(i, j, 0.5 * (full[i][j] + full[j][i]));
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.lower[r * (r + 1) / 2 + c]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.lower[r * (r + 1) / 2 + c] = v;
    }

    pub fn to_full(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.k).map(|i| self.get(i, i)).sum()
    }

    /// Componentwise (Frobenius) inner product `<A, B> = sum a_ij b_ij`.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.k, other.k);
        let mut acc = 0.0;
        for i in 0..self.k {
            for j in 0..self.k {
                acc += self.get(i, j) * other.get(i, j);
            }
        }
        acc
    }

    /// `v' M v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.k);
        let mut acc = 0.0;
        for i in 0..self.k {
            for j in 0..self.k {
                acc += v[i] * self.get(i, j) * v[j];
            }
        }
        acc
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_full().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let full = Vec::<Vec<f64>>::deserialize(d)?;
        SymMatrix::from_full(&full).map_err(de::Error::custom)
    }
}

/// Pivoted semidefinite factorization `P M P' = L D L'` with unit lower
/// triangular `L` and clamped pivots `D >= 0`.
#[derive(Clone, Debug)]
pub struct LdlFactor {
    /// `perm[i]` is the original index at permuted position `i`.
    pub perm: Vec<usize>,
    pub unit_lower: Vec<Vec<f64>>,
    pub pivots: Vec<f64>,
}

/// Outcome of [`psd_check`]: either a factorization or a witness vector
/// `v` with `v' M v < 0`.
#[derive(Clone, Debug)]
pub struct PsdCheck {
    pub psd: bool,
    pub factor: Option<LdlFactor>,
    pub witness: Option<(Vec<f64>, f64)>,
}

/// Pivoted LDL' with complete diagonal pivoting (ties to the lowest
/// index). PSD iff every pivot is at least `-tol * trace_scale`
/// (small negatives are clamped to zero); otherwise a certified witness
/// direction is returned, lifted through the partial factorization.
pub fn psd_check(m: &SymMatrix, tol: f64) -> PsdCheck {
    let k = m.size();
    let max_abs = (0..k)
        .flat_map(|i| (0..=i).map(move |j| (i, j)))
        .fold(0.0f64, |acc, (i, j)| acc.max(m.get(i, j).abs()));
    let trace_scale = (m.trace() / k.max(1) as f64)
        .max(1e-6 * max_abs)
        .max(1e-300);
    let tol_abs = tol * trace_scale;

    // Working Schur complement, kept in the permuted frame.
    let mut s = DMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            s.set(i, j, m.get(i, j));
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut l = vec![vec![0.0f64; k]; k];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut pivots = vec![0.0f64; k];

    let lift = |l: &[Vec<f64>], perm: &[usize], w: &[f64], step: usize| -> Vec<f64> {
        // Solve L' vhat = (0, ..., 0, w): unit upper triangular back
        // substitution; rows at and beyond `step` carry the identity.
        let mut vhat = vec![0.0; k];
        for (idx, &wi) in w.iter().enumerate() {
            vhat[step + idx] = wi;
        }
        for i in (0..step).rev() {
            let mut acc = vhat[i];
            for j in i + 1..k {
                acc -= l[j][i] * vhat[j];
            }
            vhat[i] = acc;
        }
        let mut v = vec![0.0; k];
        for (i, &orig) in perm.iter().enumerate() {
            v[orig] = vhat[i];
        }
        v
    };

    for step in 0..k {
        // Complete diagonal pivoting, ties to the lowest index.
        let mut best = step;
        for i in step + 1..k {
            if s.get(i, i) > s.get(best, best) {
                best = i;
            }
        }
        if best != step {
            perm.swap(step, best);
            for j in 0..k {
                let t = s.get(step, j);
                s.set(step, j, s.get(best, j));
                s.set(best, j, t);
            }
            for i in 0..k {
                let t = s.get(i, step);
                s.set(i, step, s.get(i, best));
                s.set(i, best, t);
            }
            // L's processed columns permute with the rows.
            l.swap(step, best);
            for row in l.iter_mut() {
                row.swap(step, best);
            }
        }
        let pivot = s.get(step, step);
        if pivot > tol_abs {
            pivots[step] = pivot;
            let row_vals: Vec<f64> = (step..k).map(|j| s.get(step, j)).collect();
            for i in step + 1..k {
                let factor = s.get(i, step) / pivot;
                l[i][step] = factor;
                for (off, &rv) in row_vals.iter().enumerate() {
                    let j = step + off;
                    let v = s.get(i, j) - factor * rv;
                    s.set(i, j, v);
                }
            }
            // Re-symmetrize the trailing block from its lower triangle.
            for i in step + 1..k {
                for j in step + 1..i {
                    let v = s.get(i, j);
                    s.set(j, i, v);
                }
            }
            continue;
        }
        // Complete pivoting: every remaining diagonal entry is <= tol_abs.
        let mut min_diag = f64::INFINITY;
        let mut min_idx = step;
        for i in step..k {
            if s.get(i, i) < min_diag {
                min_diag = s.get(i, i);
                min_idx = i;
            }
        }
        if min_diag < -tol_abs {
            let mut w = vec![0.0; k - step];
            w[min_idx - step] = 1.0;
            let v = lift(&l, &perm, &w, step);
            let value = m.quad_form(&v);
            return PsdCheck {
                psd: false,
                factor: None,
                witness: Some((v, value)),
            };
        }
        let mut best_off = 0.0f64;
        let mut pair = None;
        for i in step..k {
            for j in i + 1..k {
                if s.get(i, j).abs() > best_off {
                    best_off = s.get(i, j).abs();
                    pair = Some((i, j));
                }
            }
        }
        if let Some((i, j)) = pair {
            let val = s.get(i, i) + s.get(j, j) - 2.0 * best_off;
            if val < -tol_abs {
                let mut w = vec![0.0; k - step];
                w[i - step] = 1.0;
                w[j - step] = -s.get(i, j).signum();
                let v = lift(&l, &perm, &w, step);
                let value = m.quad_form(&v);
                return PsdCheck {
                    psd: false,
                    factor: None,
                    witness: Some((v, value)),
                };
            }
        }
        // Remaining block is zero to tolerance: clamp and stop.
        break;
    }

    PsdCheck {
        psd: true,
        factor: Some(LdlFactor {
            perm,
            unit_lower: l,
            pivots,
        }),
        witness: None,
    }
}

/// A Gram certificate: symmetric `G` over the graded-lex monomial basis
/// of degree at most `d` in `n` variables, representing `v' G v`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramCertificate {
    n: usize,
    d: u32,
    basis: Vec<Exponent>,
    mat: SymMatrix,
}

impl GramCertificate {
    pub fn new(n: usize, d: u32, mat: SymMatrix) -> Result<GramCertificate, SoscertError> {
        let dim = space_dim(n, d).map_err(|_| SoscertError::DimensionMismatch {
            expected: usize::MAX,
            got: 0,
        })?;
        if mat.size() != dim {
            return Err(SoscertError::DimensionMismatch {
                expected: dim,
                got: mat.size(),
            });
        }
        Ok(GramCertificate {
            n,
            d,
            basis: monomial_vector(n, d).expect("dimension already checked"),
            mat,
        })
    }

    pub fn from_full(n: usize, d: u32, full: &[Vec<f64>]) -> Result<GramCertificate, SoscertError> {
        Self::new(n, d, SymMatrix::from_full(full)?)
    }

    pub fn identity(n: usize, d: u32) -> GramCertificate {
        let dim = space_dim(n, d).expect("small dimensions");
        Self::new(n, d, SymMatrix::identity(dim)).expect("sizes agree")
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Gram size, equal to `binom(n+d, n)`.
    pub fn size(&self) -> usize {
        self.mat.size()
    }

    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.mat
    }
}

#[derive(Serialize, Deserialize)]
struct GramRepr {
    n: usize,
    d: u32,
    #[serde(rename = "G")]
    g: SymMatrix,
}

impl Serialize for GramCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GramRepr {
            n: self.n,
            d: self.d,
            g: self.mat.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramCertificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = GramRepr::deserialize(d)?;
        GramCertificate::new(repr.n, repr.d, repr.g).map_err(de::Error::custom)
    }
}

/// Expand `v' G v` into a sparse polynomial, coefficients summed exactly
/// over basis pairs.
pub fn gram_reconstruct(cert: &GramCertificate) -> SparsePoly {
    let mut p = SparsePoly::zero(cert.n.max(1));
    for i in 0..cert.basis.len() {
        for j in 0..cert.basis.len() {
            let g = cert.mat.get(i, j);
            if g != 0.0 {
                p.add_term(cert.basis[i].add(&cert.basis[j]), rat_from_f64(g));
            }
        }
    }
    p
}

/// Extract squares from a PSD Gram certificate: rows of `sqrt(D) L'`
/// mapped through the monomial basis, so that the squares sum back to
/// the reconstruction.
pub fn sos_extract(cert: &GramCertificate, tol: f64) -> Result<Vec<SparsePoly>, SoscertError> {
    let check = psd_check(&cert.mat, tol);
    if !check.psd {
        return Err(SoscertError::NotPsd);
    }
    let factor = check.factor.expect("psd outcome carries a factor");
    let k = cert.mat.size();
    let mut squares = Vec::new();
    for i in 0..k {
        if factor.pivots[i] <= 0.0 {
            continue;
        }
        let root = factor.pivots[i].sqrt();
        let mut f = SparsePoly::zero(cert.n.max(1));
        for j in 0..k {
            let coeff = root * factor.unit_lower[j][i];
            if coeff != 0.0 {
                f.add_term(cert.basis[factor.perm[j]].clone(), rat_from_f64(coeff));
            }
        }
        if !f.is_zero() {
            squares.push(f);
        }
    }
    Ok(squares)
}

/// A truncated-quadratic-module certificate: generators `g_1..g_k` and
/// Gram certificates `sigma_0..sigma_k` with
/// `f = sigma_0 + sum g_i sigma_i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleCertificate {
    pub generators: Vec<SparsePoly>,
    pub sigmas: Vec<GramCertificate>,
}

/// Outcome of [`module_verify`].
#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub ok: bool,
    /// Largest coefficient gap between `f` and the certificate expansion.
    pub residual: f64,
    /// Exponent realizing the largest gap, as monomial text.
    pub worst_exponent: Option<String>,
    /// PSD verdict per sigma, `sigma_0` first.
    pub psd: Vec<bool>,
}

/// Check `f = sigma_0 + sum g_i sigma_i` coefficient-wise within `tol`,
/// with every `sigma_i` PSD.
pub fn module_verify(
    f: &SparsePoly,
    cert: &ModuleCertificate,
    tol: f64,
) -> Result<ModuleReport, SoscertError> {
    if cert.sigmas.len() != cert.generators.len() + 1 {
        return Err(SoscertError::DegreeMismatch(format!(
            "{} generators require {} sigmas, got {}",
            cert.generators.len(),
            cert.generators.len() + 1,
            cert.sigmas.len()
        )));
    }
    let nvars = f.nvars();
    for sigma in &cert.sigmas {
        if sigma.nvars() != nvars {
            return Err(SoscertError::DimensionMismatch {
                expected: nvars,
                got: sigma.nvars(),
            });
        }
    }
    for g in &cert.generators {
        if g.nvars() != nvars {
            return Err(SoscertError::DimensionMismatch {
                expected: nvars,
                got: g.nvars(),
            });
        }
    }

    let psd: Vec<bool> = cert
        .sigmas
        .iter()
        .map(|sigma| psd_check(sigma.matrix(), DEFAULT_PSD_TOL).psd)
        .collect();

    let mut total = gram_reconstruct(&cert.sigmas[0]);
    for (g, sigma) in cert.generators.iter().zip(&cert.sigmas[1..]) {
        total = &total + &(g * &gram_reconstruct(sigma));
    }
    let diff = &total - f;
    let mut residual = 0.0f64;
    let mut worst = None;
    for (e, c) in diff.terms() {
        let mag = rat_to_f64(&num_traits::Signed::abs(c));
        if mag > residual {
            residual = mag;
            worst = Some(e.to_string());
        }
    }
    Ok(ModuleReport {
        ok: residual <= tol && psd.iter().all(|&p| p),
        residual,
        worst_exponent: worst,
        psd,
    })
}

/// The linear bijection from symmetric `k x k` matrices to quadratics in
/// `k - 1` variables: `f_A(x) = (x, 1)' A (x, 1)`, exact in rational
/// arithmetic. `A` is PSD iff `f_A` is a sum of squares.
pub fn quad_to_poly(a: &RationalMatrix) -> Result<SparsePoly, SoscertError> {
    let k = a.rows();
    if k != a.cols() {
        return Err(SoscertError::DimensionMismatch {
            expected: k,
            got: a.cols(),
        });
    }
    if k < 2 {
        return Err(SoscertError::SizeTooSmall);
    }
    for i in 0..k {
        for j in 0..i {
            if a.get(i, j) != a.get(j, i) {
                return Err(SoscertError::NotSymmetric(f64::NAN));
            }
        }
    }
    let n = k - 1;
    let mut f = SparsePoly::zero(n);
    for i in 0..k {
        for j in 0..k {
            let coeff = a.get(i, j).clone();
            let mut entries = vec![0u32; n];
            if i < n {
                entries[i] += 1;
            }
            if j < n {
                entries[j] += 1;
            }
            f.add_term(Exponent::new(entries), coeff);
        }
    }
    Ok(f)
}

/// Inverse of [`quad_to_poly`]: a degree-at-most-2 polynomial in `n`
/// variables maps to the symmetric `(n+1) x (n+1)` matrix.
pub fn poly_to_quad(f: &SparsePoly) -> Result<RationalMatrix, SoscertError> {
    if f.degree() > 2 {
        return Err(SoscertError::DegreeTooHigh(f.degree()));
    }
    let n = f.nvars();
    let k = n + 1;
    let mut a = RationalMatrix::zeros(k, k);
    let half = BigRational::new(1.into(), 2.into());
    for (e, c) in f.terms() {
        let vars: Vec<usize> = e
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| std::iter::repeat(i).take(p as usize))
            .collect();
        match vars.as_slice() {
            [] => {
                let v = a.get(n, n) + c;
                a.set(n, n, v);
            }
            [i] => {
                let v = a.get(*i, n) + c * &half;
                a.set(*i, n, v.clone());
                a.set(n, *i, v);
            }
            [i, j] if i == j => {
                let v = a.get(*i, *i) + c;
                a.set(*i, *i, v);
            }
            [i, j] => {
                let v = a.get(*i, *j) + c * &half;
                a.set(*i, *j, v.clone());
                a.set(*j, *i, v);
            }
            _ => unreachable!("degree at most 2"),
        }
    }
    Ok(a)
}

/// Outcome of [`copositive_cert_verify`].
#[derive(Clone, Debug, Serialize)]
pub struct CopositiveReport {
    pub ok: bool,
    /// Largest entrywise gap `|M - (P + N)|`.
    pub split_residual: f64,
    pub p_is_psd: bool,
    pub min_n_entry: f64,
}

/// Verify the copositivity certificate `M = P + N` with `P` PSD and `N`
/// entrywise nonnegative, everything at tolerance `tol`. This split is a
/// complete certificate of copositivity only for `k <= 4`; for larger
/// matrices it remains sound but may reject genuinely copositive `M`.
pub fn copositive_cert_verify(
    m: &SymMatrix,
    p: &SymMatrix,
    n: &SymMatrix,
    tol: f64,
) -> CopositiveReport {
    assert_eq!(m.size(), p.size());
    assert_eq!(m.size(), n.size());
    let k = m.size();
    let mut split_residual = 0.0f64;
    let mut min_n_entry = f64::INFINITY;
    for i in 0..k {
        for j in 0..k {
            split_residual = split_residual.max((m.get(i, j) - p.get(i, j) - n.get(i, j)).abs());
            min_n_entry = min_n_entry.min(n.get(i, j));
        }
    }
    let p_is_psd = psd_check(p, DEFAULT_PSD_TOL).psd;
    CopositiveReport {
        ok: split_residual <= tol && p_is_psd && min_n_entry >= -tol,
        split_residual,
        p_is_psd,
        min_n_entry,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat_int;

    fn gram_1d(d: u32, full: &[Vec<f64>]) -> GramCertificate {
        GramCertificate::from_full(1, d, full).unwrap()
    }

    #[test]
    fn reconstruct_identity_gram() {
        // (1, x) identity: 1 + x^2.
        let cert = GramCertificate::identity(1, 1);
        assert_eq!(gram_reconstruct(&cert), "1 + x0^2".parse().unwrap());
    }

    #[test]
    fn reconstruct_square_difference() {
        let cert = gram_1d(
            2,
            &[
                vec![1.0, 0.0, -1.0],
                vec![0.0, 0.0, 0.0],
                vec![-1.0, 0.0, 1.0],
            ],
        );
        assert_eq!(
            gram_reconstruct(&cert),
            "x0^4 - 2*x0^2 + 1".parse().unwrap()
        );
    }

    #[test]
    fn reconstruct_zero() {
        let cert = gram_1d(1, &[vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!(gram_reconstruct(&cert).is_zero());
    }

    #[test]
    fn psd_check_identity() {
        let check = psd_check(&SymMatrix::identity(3), DEFAULT_PSD_TOL);
        assert!(check.psd);
        let f = check.factor.unwrap();
        assert_eq!(f.pivots, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn psd_check_rank_one_boundary() {
        // Eigenvalues {2, 0, 0}.
        let m = SymMatrix::from_full(&[
            vec![1.0, 0.0, -1.0],
            vec![0.0, 0.0, 0.0],
            vec![-1.0, 0.0, 1.0],
        ])
        .unwrap();
        let check = psd_check(&m, DEFAULT_PSD_TOL);
        assert!(check.psd);
    }

    #[test]
    fn psd_check_indefinite_witness() {
        let m = SymMatrix::from_full(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let check = psd_check(&m, DEFAULT_PSD_TOL);
        assert!(!check.psd);
        let (v, value) = check.witness.unwrap();
        assert!(value < 0.0);
        assert!((m.quad_form(&v) - value).abs() < 1e-12);
        assert!((value + 2.0).abs() < 1e-12, "witness value {value}");
    }

    #[test]
    fn psd_witness_survives_partial_factorization() {
        // Indefinite with a dominant positive pivot first.
        let m = SymMatrix::from_full(&[
            vec![5.0, 1.0, 2.0],
            vec![1.0, 0.3, 1.9],
            vec![2.0, 1.9, 0.8],
        ])
        .unwrap();
        let check = psd_check(&m, DEFAULT_PSD_TOL);
        assert!(!check.psd, "matrix has a negative eigenvalue");
        let (v, value) = check.witness.unwrap();
        assert!(value < 0.0, "witness value {value}");
        assert!((m.quad_form(&v) - value).abs() <= 1e-9 * value.abs());
    }

    #[test]
    fn extract_identity_squares() {
        let cert = GramCertificate::identity(1, 1);
        let squares = sos_extract(&cert, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(squares.len(), 2);
        let sum = squares
            .iter()
            .fold(SparsePoly::zero(1), |acc, f| &acc + &f.square());
        assert_eq!(sum, gram_reconstruct(&cert));
    }

    #[test]
    fn extract_rank_one_square() {
        let cert = gram_1d(
            2,
            &[
                vec![1.0, 0.0, -1.0],
                vec![0.0, 0.0, 0.0],
                vec![-1.0, 0.0, 1.0],
            ],
        );
        let squares = sos_extract(&cert, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(squares.len(), 1);
        // (1 - x^2) up to sign.
        let f = &squares[0];
        let pos: SparsePoly = "1 - x0^2".parse().unwrap();
        let neg = -&pos;
        assert!(f == &pos || f == &neg, "{f}");
    }

    #[test]
    fn extract_zero_matrix() {
        let cert = gram_1d(1, &[vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!(sos_extract(&cert, DEFAULT_PSD_TOL).unwrap().is_empty());
    }

    #[test]
    fn extract_rejects_indefinite() {
        let cert = gram_1d(1, &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(
            sos_extract(&cert, DEFAULT_PSD_TOL),
            Err(SoscertError::NotPsd)
        ));
    }

    #[test]
    fn module_verify_examples() {
        // f = 1 + x^2 with g = x, sigma_0 its Gram, sigma_1 = 0.
        let f: SparsePoly = "1 + x0^2".parse().unwrap();
        let cert = ModuleCertificate {
            generators: vec!["x0".parse().unwrap()],
            sigmas: vec![GramCertificate::identity(1, 1), gram_1d(0, &[vec![0.0]])],
        };
        let report = module_verify(&f, &cert, 1e-9).unwrap();
        assert!(report.ok, "{report:?}");

        // f = x on {x >= 0}: sigma_0 = 0, sigma_1 = Gram of constant 1.
        let f: SparsePoly = "x0".parse().unwrap();
        let zero_sigma = gram_1d(1, &[vec![0.0, 0.0], vec![0.0, 0.0]]);
        let cert = ModuleCertificate {
            generators: vec!["x0".parse().unwrap()],
            sigmas: vec![zero_sigma.clone(), gram_1d(0, &[vec![1.0]])],
        };
        assert!(module_verify(&f, &cert, 1e-9).unwrap().ok);

        // Same with sigma_1 = Gram of constant 2: gap 1 at exponent x0.
        let cert = ModuleCertificate {
            generators: vec!["x0".parse().unwrap()],
            sigmas: vec![zero_sigma, gram_1d(0, &[vec![2.0]])],
        };
        let report = module_verify(&f, &cert, 1e-9).unwrap();
        assert!(!report.ok);
        assert!((report.residual - 1.0).abs() < 1e-12);
        assert_eq!(report.worst_exponent.as_deref(), Some("x0"));
    }

    #[test]
    fn module_verify_structure_mismatch() {
        let f: SparsePoly = "x0".parse().unwrap();
        let cert = ModuleCertificate {
            generators: vec!["x0".parse().unwrap()],
            sigmas: vec![GramCertificate::identity(1, 1)],
        };
        assert!(matches!(
            module_verify(&f, &cert, 1e-9),
            Err(SoscertError::DegreeMismatch(_))
        ));
    }

    #[test]
    fn quad_poly_dictionary() {
        let a = RationalMatrix::identity(2);
        assert_eq!(quad_to_poly(&a).unwrap(), "x0^2 + 1".parse().unwrap());

        let mut b = RationalMatrix::identity(2);
        b.set(0, 1, rat_int(-1));
        b.set(1, 0, rat_int(-1));
        assert_eq!(
            quad_to_poly(&b).unwrap(),
            "x0^2 - 2*x0 + 1".parse().unwrap()
        );

        // Round trip is exact.
        let back = poly_to_quad(&quad_to_poly(&b).unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn quad_to_poly_is_linear() {
        use crate::polyalg::rat;
        let mut a = RationalMatrix::identity(3);
        a.set(0, 1, rat(1, 3));
        a.set(1, 0, rat(1, 3));
        let mut b = RationalMatrix::zeros(3, 3);
        b.set(2, 2, rat_int(4));
        b.set(0, 2, rat(7, 2));
        b.set(2, 0, rat(7, 2));
        let t = rat(5, 7);
        let mut combo = RationalMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                combo.set(i, j, a.get(i, j) + &t * b.get(i, j));
            }
        }
        let lhs = quad_to_poly(&combo).unwrap();
        let rhs = &quad_to_poly(&a).unwrap() + &quad_to_poly(&b).unwrap().scale(&t);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn copositive_split_examples() {
        let id = SymMatrix::identity(2);
        let zero = SymMatrix::zeros(2);
        assert!(copositive_cert_verify(&id, &id, &zero, 1e-9).ok);

        let ones = SymMatrix::from_full(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(copositive_cert_verify(&ones, &zero, &ones, 1e-9).ok);

        // M = [[1,-2],[-2,1]] is not copositive ((1,1) M (1,1)' = -2);
        // every candidate split fails: P = M - N has off-diagonal
        // -2 - n01 <= -2 against a diagonal of at most 1, never PSD.
        let m = SymMatrix::from_full(&[vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        assert!(!copositive_cert_verify(&m, &m, &zero, 1e-9).ok);
        for step in 0..=10 {
            let n01 = step as f64 * 0.2;
            let n = SymMatrix::from_full(&[vec![0.0, n01], vec![n01, 0.0]]).unwrap();
            let p = SymMatrix::from_full(&[
                vec![1.0, -2.0 - n01],
                vec![-2.0 - n01, 1.0],
            ])
            .unwrap();
            assert!(!copositive_cert_verify(&m, &p, &n, 1e-9).ok);
        }
    }
}
