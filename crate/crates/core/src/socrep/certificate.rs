use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::circuit::CircuitPoly;
use crate::polyalg::{Exponent, SparsePoly};

/// A SONC decomposition: `f - bound = sum(circuit polynomials) +
/// sum(mu_gamma * x^gamma)` with every circuit term nonnegative and every
/// monomial-square multiplier `mu_gamma >= 0` over even exponents
/// `gamma`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoncCertificate {
    pub nvars: usize,
    pub circuit_terms: Vec<CircuitPoly>,
    /// `(gamma, mu_gamma)` with `gamma` even: the monomial square
    /// `mu_gamma * x^gamma`.
    pub square_terms: Vec<SquareTerm>,
    /// The certified lower bound (0 for plain membership certificates).
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquareTerm {
    pub exponent: Exponent,
    #[serde(
        serialize_with = "super::certificate::ser_rational",
        deserialize_with = "super::certificate::de_rational"
    )]
    pub coeff: BigRational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    v: &BigRational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn de_rational<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

impl SoncCertificate {
    pub fn empty(nvars: usize) -> Self {
        SoncCertificate {
            nvars,
            circuit_terms: Vec::new(),
            square_terms: Vec::new(),
            bound: 0.0,
        }
    }

    /// Sum every circuit-polynomial term and monomial-square term into
    /// one exact-rational polynomial. An empty certificate evaluates to
    /// the zero polynomial.
    pub fn to_poly(&self) -> SparsePoly {
        let mut acc = SparsePoly::zero(self.nvars);
        for term in &self.circuit_terms {
            acc = &acc + &term.to_poly();
        }
        for sq in &self.square_terms {
            acc.add_term(sq.exponent.clone(), sq.coeff.clone());
        }
        acc
    }

    /// Every circuit term passes the nonnegativity criterion and every
    /// square multiplier is nonnegative over an even exponent.
    pub fn is_valid(&self) -> bool {
        use num_traits::Signed;
        self.circuit_terms.iter().all(|t| t.is_nonnegative())
            && self
                .square_terms
                .iter()
                .all(|s| !s.coeff.is_negative() && s.exponent.is_even())
    }
}
