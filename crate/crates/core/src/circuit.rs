//! Circuits and nonnegative circuit polynomials.
//!
//! A circuit is a support set `{alpha(0), ..., alpha(k), beta}` where the
//! `alpha(i)` are even lattice points forming the vertices of a
//! k-dimensional simplex and `beta` lies in the simplex's relative
//! interior, with uniquely determined barycentric weights `lambda_i > 0`.
//!
//! For a polynomial supported on a circuit with vertex coefficients
//! `c_i >= 0`, the circuit number
//!
//! ```text
//! Theta = prod_i (c_i / lambda_i)^lambda_i
//! ```
//!
//! is the sharp threshold on the inner coefficient: the polynomial is
//! nonnegative on R^n iff `f_beta >= -Theta` (beta even) or
//! `|f_beta| <= Theta` (beta odd). Because the criterion is sharp at the
//! boundary, comparisons are done in exact rational arithmetic whenever
//! the weights have a small common denominator.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polyalg::{barycentric_weights, rat_to_f64, BaryError, Exponent, SparsePoly};

/// Default cap on the support size accepted by [`enumerate_circuits`].
pub const DEFAULT_SUPPORT_CAP: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    /// A simplex vertex has an odd entry.
    #[error("vertex {0} is not even")]
    OddVertex(Exponent),
    /// The vertices are affinely dependent.
    #[error("vertices are affinely dependent")]
    DegenerateSimplex,
    /// The inner point is not in the relative interior of the simplex.
    #[error("beta is not in the relative interior of the simplex")]
    BetaNotInterior,
    /// The inner point coincides with a vertex.
    #[error("beta coincides with a vertex")]
    BetaIsVertex,
    /// The simplex dimension is outside `1..=nvars`.
    #[error("simplex dimension {k} is outside 1..={nvars}")]
    BadDimension { k: usize, nvars: usize },
    /// A vertex coefficient is negative where nonnegative ones are required.
    #[error("negative vertex coefficient")]
    NegativeVertexCoeff,
    /// Too many support points for exhaustive circuit enumeration.
    #[error("support size {size} exceeds the enumeration cap {cap}")]
    SupportTooLarge { size: usize, cap: usize },
    /// Mixed variable counts.
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Wrong number of coefficients for the circuit.
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    /// Serialized weights disagree with the recomputed exact weights.
    #[error("serialized weights do not match the circuit geometry")]
    WeightMismatch,
}

/// An even simplex with an interior point and its exact barycentric
/// weights.
#[derive(Clone, PartialEq, Eq)]
pub struct Circuit {
    nvars: usize,
    vertices: Vec<Exponent>,
    beta: Exponent,
    weights: Vec<BigRational>,
}

impl Circuit {
    /// Validate and build a circuit from its simplex vertices and inner
    /// point. Checks, in order: vertex parity, simplex dimension, affine
    /// independence, that `beta` is not a vertex, and that `beta` lies in
    /// the relative interior (strictly positive exact weights).
    pub fn new(vertices: Vec<Exponent>, beta: Exponent) -> Result<Circuit, CircuitError> {
        let nvars = beta.nvars();
        for v in &vertices {
            if v.nvars() != nvars {
                return Err(CircuitError::DimensionMismatch {
                    expected: nvars,
                    got: v.nvars(),
                });
            }
            if !v.is_even() {
                return Err(CircuitError::OddVertex(v.clone()));
            }
        }
        if vertices.len() < 2 || vertices.len() > nvars + 1 {
            return Err(CircuitError::BadDimension {
                k: vertices.len().saturating_sub(1),
                nvars,
            });
        }
        if vertices.contains(&beta) {
            return Err(CircuitError::BetaIsVertex);
        }
        let weights = barycentric_weights(&vertices, &beta).map_err(|e| match e {
            BaryError::DegenerateSimplex => CircuitError::DegenerateSimplex,
            BaryError::Infeasible => CircuitError::BetaNotInterior,
        })?;
        Ok(Circuit {
            nvars,
            vertices,
            beta,
            weights,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Simplex dimension `k` (one less than the vertex count).
    pub fn k(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    pub fn beta(&self) -> &Exponent {
        &self.beta
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Least common multiple of the weight denominators.
    pub fn weight_denominator(&self) -> BigInt {
        self.weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
    }

    /// The full support `{alpha(0..k), beta}` of the circuit.
    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.vertices.iter().chain(std::iter::once(&self.beta))
    }
}

impl std::fmt::Debug for Circuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Circuit {{ vertices: {:?}, beta: {:?}, weights: {} }}",
            self.vertices,
            self.beta,
            self.weights.iter().map(|w| w.to_string()).join(", ")
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    vertices: Vec<Vec<u32>>,
    beta: Vec<u32>,
    weights: Vec<String>,
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CircuitRepr {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.entries().to_vec())
                .collect(),
            beta: self.beta.entries().to_vec(),
            weights: self.weights.iter().map(|w| w.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CircuitRepr::deserialize(d)?;
        let vertices = repr.vertices.into_iter().map(Exponent::new).collect();
        let circuit =
            Circuit::new(vertices, Exponent::new(repr.beta)).map_err(de::Error::custom)?;
        // Serialized weights are redundant; require them to agree with the
        // recomputed exact ones (or be absent).
        if !repr.weights.is_empty() {
            if repr.weights.len() != circuit.weights.len() {
                return Err(de::Error::custom(CircuitError::WeightMismatch));
            }
            for (s, w) in repr.weights.iter().zip(&circuit.weights) {
                let parsed: BigRational = s
                    .parse()
                    .map_err(|_| de::Error::custom(CircuitError::WeightMismatch))?;
                if &parsed != w {
                    return Err(de::Error::custom(CircuitError::WeightMismatch));
                }
            }
        }
        Ok(circuit)
    }
}

/// A polynomial supported on a circuit: vertex coefficients plus the
/// inner coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitPoly {
    circuit: Circuit,
    #[serde(
        serialize_with = "ser_rationals",
        deserialize_with = "de_rationals"
    )]
    vertex_coeffs: Vec<BigRational>,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    beta_coeff: BigRational,
}

fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .serialize(s)
}

fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| s.parse().map_err(de::Error::custom))
        .collect()
}

fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    v.to_string().serialize(s)
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    String::deserialize(d)?.parse().map_err(de::Error::custom)
}

impl CircuitPoly {
    pub fn new(
        circuit: Circuit,
        vertex_coeffs: Vec<BigRational>,
        beta_coeff: BigRational,
    ) -> Result<CircuitPoly, CircuitError> {
        if vertex_coeffs.len() != circuit.vertices.len() {
            return Err(CircuitError::CoefficientCount {
                expected: circuit.vertices.len(),
                got: vertex_coeffs.len(),
            });
        }
        Ok(CircuitPoly {
            circuit,
            vertex_coeffs,
            beta_coeff,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn vertex_coeffs(&self) -> &[BigRational] {
        &self.vertex_coeffs
    }

    pub fn beta_coeff(&self) -> &BigRational {
        &self.beta_coeff
    }

    /// The circuit number `Theta = prod (c_i / lambda_i)^lambda_i`,
    /// computed as `exp(sum lambda_i (ln c_i - ln lambda_i))`. Zero when
    /// any vertex coefficient is zero; error when one is negative.
    pub fn circuit_number(&self) -> Result<f64, CircuitError> {
        if self.vertex_coeffs.iter().any(|c| c.is_negative()) {
            return Err(CircuitError::NegativeVertexCoeff);
        }
        if self.vertex_coeffs.iter().any(|c| c.is_zero()) {
            return Ok(0.0);
        }
        let mut log_acc = 0.0f64;
        for (c, w) in self.vertex_coeffs.iter().zip(&self.circuit.weights) {
            let lw = rat_to_f64(w);
            log_acc += lw * (rat_to_f64(c).ln() - lw.ln());
        }
        Ok(log_acc.exp())
    }

    /// The nonnegativity criterion for the closed cone `P_{n,A}`:
    /// all vertex coefficients `>= 0` and `f_beta >= -Theta` (beta even)
    /// or `|f_beta| <= Theta` (beta odd).
    pub fn is_nonnegative(&self) -> bool {
        if self.vertex_coeffs.iter().any(|c| c.is_negative()) {
            return false;
        }
        self.beta_within_bound()
    }

    /// The criterion for the set of nonnegative circuit polynomials
    /// proper: vertex coefficients strictly positive, same beta bound.
    pub fn is_strict_member(&self) -> bool {
        if !self.vertex_coeffs.iter().all(|c| c.is_positive()) {
            return false;
        }
        self.beta_within_bound()
    }

    /// True when `f_beta` sits exactly on the criterion boundary
    /// (`|f_beta| = Theta`, nonzero), under the same exact/float regime
    /// as the bound check itself.
    pub fn is_boundary(&self) -> bool {
        if self.beta_coeff.is_zero() {
            return false;
        }
        match self.theta_pow_q() {
            Some((theta_q, q)) => {
                let fb = self.beta_coeff.abs().pow(q as i32);
                fb == theta_q
            }
            None => {
                let theta = match self.circuit_number() {
                    Ok(t) => t,
                    Err(_) => return false,
                };
                let fb = rat_to_f64(&self.beta_coeff.abs());
                (fb - theta).abs() <= 1e-12 * (1.0 + theta)
            }
        }
    }

    /// `Theta^q` as an exact rational together with `q`, when the common
    /// weight denominator `q` is at most 64. None otherwise (or when a
    /// vertex coefficient is negative).
    fn theta_pow_q(&self) -> Option<(BigRational, u64)> {
        if self.vertex_coeffs.iter().any(|c| c.is_negative()) {
            return None;
        }
        let q_big = self.circuit.weight_denominator();
        let q = q_big.to_u64().filter(|&q| q <= 64)?;
        let mut theta_q = BigRational::one();
        for (c, w) in self.vertex_coeffs.iter().zip(&self.circuit.weights) {
            let p = (w * BigRational::from_integer(q_big.clone()))
                .to_integer()
                .to_i32()
                .expect("weight numerator fits i32 for q <= 64");
            theta_q *= (c / w).pow(p);
        }
        Some((theta_q, q))
    }

    /// Shared bound comparison: exact rational cross-multiplication when
    /// the common weight denominator is `<= 64`, else extended-precision
    /// float comparison at relative tolerance `1e-12 * (1 + Theta)`.
    fn beta_within_bound(&self) -> bool {
        let beta_even = self.circuit.beta.is_even();
        if beta_even && !self.beta_coeff.is_negative() {
            return true; // no upper bound applies on the even branch
        }
        match self.theta_pow_q() {
            Some((theta_q, q)) => {
                // |f_beta| <= Theta  <=>  |f_beta|^q <= Theta^q, exactly.
                let fb = self.beta_coeff.abs().pow(q as i32);
                fb <= theta_q
            }
            None => {
                let theta = match self.circuit_number() {
                    Ok(t) => t,
                    Err(_) => return false,
                };
                let tol = 1e-12 * (1.0 + theta);
                let fb = rat_to_f64(&self.beta_coeff);
                if beta_even {
                    fb >= -theta - tol
                } else {
                    fb.abs() <= theta + tol
                }
            }
        }
    }

    /// Expand into a [`SparsePoly`] (exact rational coefficients).
    pub fn to_poly(&self) -> SparsePoly {
        let mut p = SparsePoly::zero(self.circuit.nvars);
        for (v, c) in self.circuit.vertices.iter().zip(&self.vertex_coeffs) {
            p.add_term(v.clone(), c.clone());
        }
        p.add_term(self.circuit.beta.clone(), self.beta_coeff.clone());
        p
    }
}

/// All circuits whose vertex set is an affinely independent subset of
/// `E = {even support points} ∪ {0} ∪ {2d·e_i}` and whose `beta` is a
/// support point in the simplex's relative interior. Deterministic
/// order, no duplicates. Support points of degree above `two_d` are
/// ignored.
///
/// This is the support-restricted candidate pool; summing over all
/// admissible circuits of degree `2d` is astronomically large, so the
/// pool is restricted to support-adjacent circuits and results built
/// from it are flagged `support_restricted`.
pub fn enumerate_circuits(
    nvars: usize,
    support: &[Exponent],
    two_d: u32,
    cap: usize,
) -> Result<Vec<Circuit>, CircuitError> {
    for e in support {
        if e.nvars() != nvars {
            return Err(CircuitError::DimensionMismatch {
                expected: nvars,
                got: e.nvars(),
            });
        }
    }
    let support: BTreeSet<Exponent> = support
        .iter()
        .filter(|e| e.degree() <= two_d)
        .cloned()
        .collect();
    if support.len() > cap {
        return Err(CircuitError::SupportTooLarge {
            size: support.len(),
            cap,
        });
    }

    let mut pool: BTreeSet<Exponent> = support.iter().filter(|e| e.is_even()).cloned().collect();
    pool.insert(Exponent::zero(nvars));
    if two_d % 2 == 0 {
        for i in 0..nvars {
            pool.insert(Exponent::axis(nvars, i, two_d));
        }
    }

    let mut out = Vec::new();
    for beta in &support {
        let candidates: Vec<&Exponent> = pool.iter().filter(|v| *v != beta).collect();
        let max_size = (nvars + 1).min(candidates.len());
        for size in 2..=max_size {
            for combo in candidates.iter().combinations(size) {
                let vertices: Vec<Exponent> = combo.iter().map(|v| (**v).clone()).collect();
                if let Ok(c) = Circuit::new(vertices, beta.clone()) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, rat_int};

    fn ex(entries: &[u32]) -> Exponent {
        Exponent::new(entries.to_vec())
    }

    pub(crate) fn motzkin_circuit() -> Circuit {
        Circuit::new(
            vec![ex(&[4, 2]), ex(&[2, 4]), ex(&[0, 0])],
            ex(&[2, 2]),
        )
        .unwrap()
    }

    #[test]
    fn motzkin_circuit_weights() {
        let c = motzkin_circuit();
        assert_eq!(c.weights(), &[rat(1, 3), rat(1, 3), rat(1, 3)]);
        assert_eq!(c.k(), 2);
    }

    #[test]
    fn univariate_midpoint_circuit() {
        let c = Circuit::new(vec![ex(&[0]), ex(&[4])], ex(&[2])).unwrap();
        assert_eq!(c.weights(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn odd_vertex_rejected() {
        let err = Circuit::new(
            vec![ex(&[1, 0]), ex(&[0, 2]), ex(&[0, 0])],
            ex(&[0, 1]),
        )
        .unwrap_err();
        assert_eq!(err, CircuitError::OddVertex(ex(&[1, 0])));
    }

    #[test]
    fn beta_outside_rejected() {
        assert_eq!(
            Circuit::new(vec![ex(&[0]), ex(&[4])], ex(&[6])),
            Err(CircuitError::BetaNotInterior)
        );
        assert_eq!(
            Circuit::new(vec![ex(&[0]), ex(&[4])], ex(&[4])),
            Err(CircuitError::BetaIsVertex)
        );
    }

    #[test]
    fn degenerate_simplex_rejected() {
        assert_eq!(
            Circuit::new(
                vec![ex(&[0, 0]), ex(&[2, 2]), ex(&[4, 4])],
                ex(&[1, 1])
            ),
            Err(CircuitError::DegenerateSimplex)
        );
    }

    fn motzkin_poly(beta_coeff: BigRational) -> CircuitPoly {
        CircuitPoly::new(
            motzkin_circuit(),
            vec![rat_int(1), rat_int(1), rat_int(1)],
            beta_coeff,
        )
        .unwrap()
    }

    #[test]
    fn motzkin_circuit_number_is_three() {
        // (1/(1/3))^(1/3) cubed over the three vertices: Theta = 3,
        // cross-checked by the exact rational power below.
        let p = motzkin_poly(rat_int(-3));
        let theta = p.circuit_number().unwrap();
        assert!((theta - 3.0).abs() <= 1e-12);
        let (theta_q, q) = p.theta_pow_q().unwrap();
        assert_eq!(q, 3);
        assert_eq!(theta_q, rat_int(27));
    }

    #[test]
    fn circuit_number_of_weights_is_one() {
        let c = motzkin_circuit();
        let coeffs = c.weights().to_vec();
        let p = CircuitPoly::new(c, coeffs, rat_int(0)).unwrap();
        assert!((p.circuit_number().unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn circuit_number_zero_coefficient() {
        let p = CircuitPoly::new(
            motzkin_circuit(),
            vec![rat_int(0), rat_int(1), rat_int(1)],
            rat_int(0),
        )
        .unwrap();
        assert_eq!(p.circuit_number().unwrap(), 0.0);
    }

    #[test]
    fn circuit_number_rejects_negative() {
        let p = CircuitPoly::new(
            motzkin_circuit(),
            vec![rat_int(-1), rat_int(1), rat_int(1)],
            rat_int(0),
        )
        .unwrap();
        assert_eq!(p.circuit_number(), Err(CircuitError::NegativeVertexCoeff));
    }

    #[test]
    fn motzkin_boundary_classifies_nonnegative() {
        // Oracle: grid search over [-2,2]^2 finds min 0 for the Motzkin
        // polynomial and a negative value once f_beta drops below -3.
        let good = motzkin_poly(rat_int(-3));
        assert!(good.is_nonnegative());
        assert!(good.is_boundary());
        let mut grid_min = f64::INFINITY;
        let poly = good.to_poly();
        let bad = motzkin_poly(rat(-301, 100));
        let bad_poly = bad.to_poly();
        let mut bad_min = f64::INFINITY;
        let steps = 80;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = -2.0 + 4.0 * i as f64 / steps as f64;
                let y = -2.0 + 4.0 * j as f64 / steps as f64;
                grid_min = grid_min.min(poly.eval(&[x, y]));
                bad_min = bad_min.min(bad_poly.eval(&[x, y]));
            }
        }
        assert!(grid_min >= -1e-9, "grid min {grid_min}");
        assert!(bad_min < -1e-4, "grid min {bad_min}");
        assert!(!bad.is_nonnegative());
    }

    #[test]
    fn univariate_boundary_case() {
        // x^4 - 2x^2 + 1 = (x^2 - 1)^2 >= 0; Theta = 2.
        let c = Circuit::new(vec![ex(&[0]), ex(&[4])], ex(&[2])).unwrap();
        let p = CircuitPoly::new(c, vec![rat_int(1), rat_int(1)], rat_int(-2)).unwrap();
        assert!((p.circuit_number().unwrap() - 2.0).abs() <= 1e-12);
        assert!(p.is_nonnegative());
        assert!(p.is_boundary());
    }

    #[test]
    fn strict_membership() {
        assert!(motzkin_poly(rat_int(-3)).is_strict_member());
        let zero_vertex = CircuitPoly::new(
            motzkin_circuit(),
            vec![rat_int(0), rat_int(1), rat_int(1)],
            rat_int(0),
        )
        .unwrap();
        assert!(!zero_vertex.is_strict_member());
        assert!(zero_vertex.is_nonnegative());
        // Even beta has no upper bound: f_beta = +Theta (and beyond) is fine.
        assert!(motzkin_poly(rat_int(3)).is_strict_member());
        assert!(motzkin_poly(rat_int(100)).is_strict_member());
    }

    #[test]
    fn odd_beta_two_sided_bound() {
        // x^4 + 1 with inner monomial x^2 replaced by odd beta = 3:
        // vertices {0, 4}? beta (3) has weights (1/4, 3/4); Theta for
        // coefficients (1,1) is (4)^(1/4) * (4/3)^(3/4).
        let c = Circuit::new(vec![ex(&[0]), ex(&[4])], ex(&[3])).unwrap();
        assert_eq!(c.weights(), &[rat(1, 4), rat(3, 4)]);
        let theta = CircuitPoly::new(c.clone(), vec![rat_int(1), rat_int(1)], rat_int(0))
            .unwrap()
            .circuit_number()
            .unwrap();
        let below = CircuitPoly::new(
            c.clone(),
            vec![rat_int(1), rat_int(1)],
            crate::polyalg::rat_from_f64(theta * 0.999),
        )
        .unwrap();
        assert!(below.is_nonnegative());
        let above = CircuitPoly::new(
            c,
            vec![rat_int(1), rat_int(1)],
            crate::polyalg::rat_from_f64(theta * 1.001),
        )
        .unwrap();
        assert!(!above.is_nonnegative());
    }

    #[test]
    fn theta_positively_homogeneous() {
        let p = motzkin_poly(rat_int(-3));
        let theta = p.circuit_number().unwrap();
        for &t in &[0.5f64, 2.0, 17.25] {
            let scaled = CircuitPoly::new(
                p.circuit.clone(),
                p.vertex_coeffs
                    .iter()
                    .map(|c| c * crate::polyalg::rat_from_f64(t))
                    .collect(),
                rat_int(0),
            )
            .unwrap();
            let st = scaled.circuit_number().unwrap();
            assert!(
                (st - t * theta).abs() <= 1e-12 * (1.0 + t * theta),
                "t={t}: {st} vs {}",
                t * theta
            );
        }
    }

    #[test]
    fn enumerate_finds_motzkin_circuit() {
        let support = vec![ex(&[4, 2]), ex(&[2, 4]), ex(&[2, 2]), ex(&[0, 0])];
        let circuits = enumerate_circuits(2, &support, 6, DEFAULT_SUPPORT_CAP).unwrap();
        // Vertex lists come out in graded-lex order.
        let target = Circuit::new(
            vec![ex(&[0, 0]), ex(&[4, 2]), ex(&[2, 4])],
            ex(&[2, 2]),
        )
        .unwrap();
        assert!(circuits.contains(&target), "got {circuits:#?}");
        // Everything returned re-validates.
        for c in &circuits {
            Circuit::new(c.vertices().to_vec(), c.beta().clone()).unwrap();
        }
    }

    #[test]
    fn enumerate_univariate_degree_cap() {
        let support = vec![ex(&[0]), ex(&[2])];
        let with_cap4 = enumerate_circuits(1, &support, 4, DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(with_cap4.len(), 1);
        assert_eq!(with_cap4[0].vertices(), &[ex(&[0]), ex(&[4])]);
        assert_eq!(with_cap4[0].beta(), &ex(&[2]));
        let with_cap2 = enumerate_circuits(1, &support, 2, DEFAULT_SUPPORT_CAP).unwrap();
        assert!(with_cap2.is_empty());
    }

    #[test]
    fn enumerate_single_even_point() {
        // At the tight degree cap no interior point is available.
        let circuits = enumerate_circuits(2, &[ex(&[2, 0])], 2, DEFAULT_SUPPORT_CAP).unwrap();
        assert!(circuits.is_empty(), "got {circuits:#?}");
    }

    #[test]
    fn enumerate_respects_cap() {
        let support: Vec<Exponent> = (0..30).map(|i| ex(&[i, 0])).collect();
        assert!(matches!(
            enumerate_circuits(2, &support, 60, 25),
            Err(CircuitError::SupportTooLarge { .. })
        ));
    }

    #[test]
    fn circuit_json_round_trip() {
        let c = motzkin_circuit();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"1/3\""));
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
        // Tampered weights are rejected.
        let bad = json.replace("1/3", "1/4");
        assert!(serde_json::from_str::<Circuit>(&bad).is_err());
    }
}
