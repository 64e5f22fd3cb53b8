//! Executable oracles for the lower-bound machinery on semidefinite
//! extension degrees: point configurations in general linear position,
//! vanishing polynomials on chosen subsets, squared witness families
//! whose zero patterns separate every k-subset, PSD image-orthogonality,
//! and greedy subspace-sum reduction.
//!
//! A set of points is in general linear position (through the monomial
//! embedding `x -> v_{n,d}(x)`) when every subset of at most
//! `binom(n+d, n)` embedded vectors is linearly independent. For such a
//! configuration, a nonzero polynomial of degree at most `d` vanishes on
//! at most `binom(n+d, n) - 1` of the points, so the square of a
//! polynomial vanishing exactly on a k-subset `T` is zero on `T` and
//! strictly positive on the rest: the separation property behind the
//! extension-degree bounds.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{det, jacobi_eigh, DMat};
use crate::polyalg::{
    monomial_vector, space_dim, RationalMatrix, SparsePoly,
};
use crate::soscert::{psd_check, SymMatrix, DEFAULT_PSD_TOL};

/// Normalized-minor threshold certifying general position.
pub const MINOR_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NeighborlyError {
    /// Rejection sampling exceeded its attempt budget (practically
    /// unreachable: general position is dense).
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    /// More vanishing points than the space dimension allows.
    #[error("{got} points exceed the limit {max} for degree-bounded vanishing")]
    TooManyPoints { got: usize, max: usize },
    /// A matrix handed to the PSD-pair check is not PSD.
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    /// Point/variable dimension mismatch.
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Fewer points than the requested subset size.
    #[error("configuration has {points} points, need at least {needed}")]
    NotEnoughPoints { points: usize, needed: usize },
}

/// Deterministic splitmix64 generator for reproducible fixtures.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1]`.
    pub fn next_pm1(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// A point configuration whose monomial embedding is certified to be in
/// general linear position.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Configuration {
    pub n: usize,
    pub d: u32,
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space_dim(&self) -> usize {
        space_dim(self.n, self.d).expect("desk-scale dimensions")
    }

    /// Monomial embedding `v_{n,d}(x)` of one point, graded-lex order.
    pub fn embed(&self, point: &[f64]) -> Vec<f64> {
        monomial_vector(self.n, self.d)
            .expect("desk-scale dimensions")
            .iter()
            .map(|e| {
                e.entries()
                    .iter()
                    .zip(point)
                    .map(|(&p, x)| x.powi(p as i32))
                    .product()
            })
            .collect()
    }

    /// Exhaustively recheck general position: every subset of size
    /// `min(N, binom(n+d, n))` of the embedded vectors passes the
    /// row-normalized minor threshold.
    pub fn certify(&self) -> bool {
        let dim = self.space_dim();
        let rows: Vec<Vec<f64>> = self.points.iter().map(|p| normalize(self.embed(p))).collect();
        let r = dim.min(rows.len());
        if rows.len() <= dim {
            return float_rank(&rows, MINOR_THRESHOLD) == rows.len();
        }
        (0..rows.len()).combinations(r).all(|subset| {
            let mut m = DMat::zeros(r, r);
            for (i, &idx) in subset.iter().enumerate() {
                for j in 0..r {
                    m.set(i, j, rows[idx][j]);
                }
            }
            det(m).abs() > MINOR_THRESHOLD
        })
    }
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut v {
            *x /= norm;
        }
    }
    v
}

/// Row rank of a small dense matrix at a pivot threshold.
fn float_rank(rows: &[Vec<f64>], threshold: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == a.len() {
            break;
        }
        let mut best = rank;
        for r in rank + 1..a.len() {
            if a[r][col].abs() > a[best][col].abs() {
                best = r;
            }
        }
        if a[best][col].abs() <= threshold {
            continue;
        }
        a.swap(rank, best);
        for r in 0..a.len() {
            if r == rank {
                continue;
            }
            let factor = a[r][col] / a[rank][col];
            for c in col..cols {
                a[r][c] -= factor * a[rank][c];
            }
        }
        rank += 1;
    }
    rank
}

/// Sample `num_points` points from the uniform distribution on
/// `[-1, 1]^n` with a deterministic PRNG, rejecting any arrival that
/// breaks the general-position certificate. At most `100 * num_points`
/// attempts.
pub fn sample_general_position(
    n: usize,
    d: u32,
    num_points: usize,
    seed: u64,
) -> Result<Configuration, NeighborlyError> {
    let dim = space_dim(n, d).expect("desk-scale dimensions");
    let mut rng = SplitMix64::new(seed);
    let mut config = Configuration {
        n,
        d,
        seed,
        points: Vec::with_capacity(num_points),
    };
    let mut embedded: Vec<Vec<f64>> = Vec::with_capacity(num_points);
    let budget = 100 * num_points.max(1);
    let mut attempts = 0;
    while config.points.len() < num_points {
        if attempts >= budget {
            return Err(NeighborlyError::SamplingExhausted(attempts));
        }
        attempts += 1;
        let candidate: Vec<f64> = (0..n).map(|_| rng.next_pm1()).collect();
        let row = normalize(config.embed(&candidate));
        if arrival_ok(&embedded, &row, dim) {
            embedded.push(row);
            config.points.push(candidate);
        }
    }
    debug_assert!(config.certify());
    Ok(config)
}

/// Every `dim`-subset involving the new row must stay above the minor
/// threshold; smaller prefixes reduce to a rank check. Combined with the
/// same check at every earlier arrival this certifies the whole
/// configuration.
fn arrival_ok(existing: &[Vec<f64>], row: &[f64], dim: usize) -> bool {
    let total = existing.len() + 1;
    if total <= dim {
        let mut rows: Vec<Vec<f64>> = existing.to_vec();
        rows.push(row.to_vec());
        return float_rank(&rows, MINOR_THRESHOLD) == total;
    }
    for subset in (0..existing.len()).combinations(dim - 1) {
        let mut m = DMat::zeros(dim, dim);
        for (i, &idx) in subset.iter().enumerate() {
            for j in 0..dim {
                m.set(i, j, existing[idx][j]);
            }
        }
        for j in 0..dim {
            m.set(dim - 1, j, row[j]);
        }
        if det(m).abs() <= MINOR_THRESHOLD {
            return false;
        }
    }
    true
}

/// A nonzero polynomial of degree at most `d` vanishing on the chosen
/// points, from the exact nullspace of the evaluation matrix.
///
/// Selection is deterministic: the first nullspace basis vector under
/// graded-lex column pivoting, normalized to unit maximum coefficient.
pub fn vanishing_poly(
    config: &Configuration,
    t_indices: &[usize],
) -> Result<SparsePoly, NeighborlyError> {
    let dim = config.space_dim();
    if t_indices.len() > dim - 1 {
        return Err(NeighborlyError::TooManyPoints {
            got: t_indices.len(),
            max: dim - 1,
        });
    }
    let basis = monomial_vector(config.n, config.d).expect("desk-scale dimensions");
    let mut m = RationalMatrix::zeros(t_indices.len(), dim);
    for (r, &t) in t_indices.iter().enumerate() {
        let embedded = config.embed(&config.points[t]);
        for (c, v) in embedded.iter().enumerate() {
            m.set(r, c, crate::polyalg::rat_from_f64(*v));
        }
    }
    let nullspace = m.nullspace();
    let vector = nullspace.first().expect("underdetermined system");
    let max_abs = vector
        .iter()
        .map(|v| v.abs())
        .max()
        .expect("nonzero basis vector");
    let mut f = SparsePoly::zero(config.n);
    for (e, c) in basis.iter().zip(vector) {
        f.add_term(e.clone(), c / &max_abs);
    }
    Ok(f)
}

/// For every k-subset `T` of the configuration, a polynomial in the SOS
/// cone (a square) vanishing on `T` and strictly positive elsewhere.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub config: Configuration,
    pub k: usize,
    /// Sorted index subset -> squared vanishing polynomial.
    pub polys: BTreeMap<Vec<usize>, SparsePoly>,
}

/// Build the witness family: `f_T = (vanishing polynomial on T)^2`.
pub fn witness_family(
    config: &Configuration,
    k: usize,
) -> Result<WitnessFamily, NeighborlyError> {
    if config.len() < k {
        return Err(NeighborlyError::NotEnoughPoints {
            points: config.len(),
            needed: k,
        });
    }
    let mut polys = BTreeMap::new();
    for t in (0..config.len()).combinations(k) {
        let f = vanishing_poly(config, &t)?;
        polys.insert(t, f.square());
    }
    Ok(WitnessFamily {
        config: config.clone(),
        k,
        polys,
    })
}

/// One threshold violation found by [`verify_star`].
#[derive(Clone, Debug, Serialize)]
pub struct StarViolation {
    pub subset: Vec<usize>,
    pub point: usize,
    pub value: f64,
    pub scale: f64,
    pub kind: String,
}

/// Outcome of [`verify_star`]. Slacks and margins are relative to each
/// polynomial's maximum absolute value over the configuration.
#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub ok: bool,
    /// Largest `|f_T(s)| / scale_T` over `s in T` (want <= 1e-9).
    pub worst_zero_slack: f64,
    /// Smallest `f_T(s) / scale_T` over `s not in T` (want > 1e-6).
    pub worst_positive_margin: f64,
    pub violations: Vec<StarViolation>,
}

/// Evaluate the separation property: each `f_T` vanishes on `T`
/// (relative slack at most 1e-9) and is strictly positive on the rest
/// (relative margin above 1e-6).
pub fn verify_star(family: &WitnessFamily) -> StarReport {
    let mut worst_zero = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    let mut violations = Vec::new();
    for (t, f) in &family.polys {
        let values: Vec<f64> = family.config.points.iter().map(|p| f.eval(p)).collect();
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            violations.push(StarViolation {
                subset: t.clone(),
                point: usize::MAX,
                value: 0.0,
                scale,
                kind: "zero polynomial".into(),
            });
            continue;
        }
        for (s, &value) in values.iter().enumerate() {
            let rel = value / scale;
            if t.contains(&s) {
                worst_zero = worst_zero.max(rel.abs());
                if rel.abs() > 1e-9 {
                    violations.push(StarViolation {
                        subset: t.clone(),
                        point: s,
                        value,
                        scale,
                        kind: "nonzero on T".into(),
                    });
                }
            } else {
                worst_margin = worst_margin.min(rel);
                if rel <= 1e-6 {
                    violations.push(StarViolation {
                        subset: t.clone(),
                        point: s,
                        value,
                        scale,
                        kind: "not strictly positive off T".into(),
                    });
                }
            }
        }
    }
    StarReport {
        ok: violations.is_empty(),
        worst_zero_slack: worst_zero,
        worst_positive_margin: worst_margin,
        violations,
    }
}

/// The slack table `f_T(s)` as CSV: one row per subset `T`, one column
/// per configuration point.
pub fn slack_table_csv(family: &WitnessFamily) -> String {
    let mut out = String::from("T");
    for s in 0..family.config.len() {
        out.push_str(&format!(",s{s}"));
    }
    out.push('\n');
    for (t, f) in &family.polys {
        let label = t.iter().map(usize::to_string).join("|");
        out.push_str(&label);
        for p in &family.config.points {
            out.push_str(&format!(",{:.6e}", f.eval(p)));
        }
        out.push('\n');
    }
    out
}

/// Outcome of [`psd_orthogonality`].
#[derive(Clone, Debug, Serialize)]
pub struct PsdOrthogonality {
    /// Componentwise inner product `<A, B>`.
    pub inner: f64,
    /// Ranges orthogonal, decided from eigen-bases at the matched rank
    /// threshold.
    pub orthogonal_images: bool,
    /// The two routes agree: `<A,B> <= tol  <=>  orthogonal images`.
    pub consistent: bool,
}

/// For PSD `A`, `B`: `<A, B> = 0` iff the image of `A` is orthogonal to
/// the image of `B`. Both routes are computed independently — the inner
/// product componentwise, the image test through eigen-bases truncated
/// at `tol * lambda_max` — and cross-checked.
pub fn psd_orthogonality(
    a: &SymMatrix,
    b: &SymMatrix,
    tol: f64,
) -> Result<PsdOrthogonality, NeighborlyError> {
    if a.size() != b.size() {
        return Err(NeighborlyError::DimensionMismatch {
            expected: a.size(),
            got: b.size(),
        });
    }
    if !psd_check(a, DEFAULT_PSD_TOL).psd || !psd_check(b, DEFAULT_PSD_TOL).psd {
        return Err(NeighborlyError::NotPsd);
    }
    let k = a.size();
    let inner = a.inner(b);

    let flat = |m: &SymMatrix| -> Vec<f64> {
        (0..k)
            .flat_map(|i| (0..k).map(move |j| m.get(i, j)))
            .collect()
    };
    let (vals_a, vecs_a) = jacobi_eigh(k, &flat(a));
    let (vals_b, vecs_b) = jacobi_eigh(k, &flat(b));
    let cut_a = tol * vals_a.first().copied().unwrap_or(0.0).max(0.0);
    let cut_b = tol * vals_b.first().copied().unwrap_or(0.0).max(0.0);

    // Largest term lambda_i mu_j <a_i, b_j>^2 of the spectral expansion
    // of <A, B>; the images are orthogonal iff every term vanishes.
    let mut max_term = 0.0f64;
    for (i, &la) in vals_a.iter().enumerate() {
        if la <= cut_a {
            continue;
        }
        for (j, &mb) in vals_b.iter().enumerate() {
            if mb <= cut_b {
                continue;
            }
            let dot: f64 = (0..k).map(|r| vecs_a.get(r, i) * vecs_b.get(r, j)).sum();
            max_term = max_term.max(la * mb * dot * dot);
        }
    }
    let orthogonal_images = max_term <= tol;
    Ok(PsdOrthogonality {
        inner,
        orthogonal_images,
        consistent: (inner <= tol) == orthogonal_images,
    })
}

/// Greedy basis of `U_1 + ... + U_n`: walk the spaces in order,
/// accepting each basis vector that adds rank (QR-style residual test at
/// 1e-10 of the original norm), tagging it with its source. Returns the
/// accumulated basis and the used source set `I` with `|I| <= k`.
pub fn subspace_sum_basis(
    spaces: &[Vec<Vec<f64>>],
    ambient: usize,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut sources: Vec<usize> = Vec::new();
    for (idx, space) in spaces.iter().enumerate() {
        for vector in space {
            assert_eq!(vector.len(), ambient, "ambient dimension mismatch");
            let orig_norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
            if orig_norm == 0.0 {
                continue;
            }
            let mut residual = vector.clone();
            for q in &basis {
                let proj: f64 = residual.iter().zip(q).map(|(r, qv)| r * qv).sum();
                for (r, qv) in residual.iter_mut().zip(q) {
                    *r -= proj * qv;
                }
            }
            let res_norm = residual.iter().map(|v| v * v).sum::<f64>().sqrt();
            if res_norm > 1e-10 * orig_norm {
                for r in &mut residual {
                    *r /= res_norm;
                }
                basis.push(residual);
                if sources.last() != Some(&idx) {
                    sources.push(idx);
                }
            }
        }
        if basis.len() == ambient {
            break;
        }
    }
    (basis, sources)
}
