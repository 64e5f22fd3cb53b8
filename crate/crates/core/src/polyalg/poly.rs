use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_poly, rat_to_f64, Exponent, ParseError};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Kept in normal form: no stored coefficient is zero, every exponent has
/// length `nvars`. Terms iterate in graded-lex order.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "need at least one variable");
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Exponent::zero(nvars), c);
        p
    }

    pub fn monomial(exponent: Exponent, coeff: BigRational) -> Self {
        let mut p = Self::zero(exponent.nvars());
        p.add_term(exponent, coeff);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; the zero polynomial has degree -1 by convention.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Coefficient of `exponent` (zero if absent).
    pub fn coeff(&self, exponent: &Exponent) -> BigRational {
        self.terms.get(exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Add `coeff * x^exponent`, keeping the normal form.
    pub fn add_term(&mut self, exponent: Exponent, coeff: BigRational) {
        assert_eq!(exponent.nvars(), self.nvars, "exponent length mismatch");
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    /// The support, in graded-lex order.
    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    /// Largest absolute coefficient, rounded to f64 (0 for the zero
    /// polynomial). The infinity norm of the coefficient vector.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: &BigRational) -> SparsePoly {
        if factor.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    pub fn square(&self) -> SparsePoly {
        self * self
    }

    /// Evaluate at a real point. Terms are accumulated with Neumaier
    /// compensation, which carries more than 80 bits of effective
    /// precision through the summation before the final rounding.
    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (e, c) in &self.terms {
            let mut term = rat_to_f64(c);
            for (xi, &ei) in x.iter().zip(e.entries()) {
                term *= xi.powi(ei as i32);
            }
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e.entries()) {
                for _ in 0..ei {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// Sum of `|c_alpha| * prod |x_i|^alpha_i`: the natural magnitude
    /// scale of a floating-point evaluation at `x`.
    pub fn eval_magnitude(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = rat_to_f64(&c.abs());
            for (xi, &ei) in x.iter().zip(e.entries()) {
                term *= xi.abs().powi(ei as i32);
            }
            acc += term;
        }
        acc
    }

    /// Gradient as a vector of partial-derivative polynomials.
    pub fn gradient(&self) -> Vec<SparsePoly> {
        (0..self.nvars)
            .map(|i| {
                let mut d = SparsePoly::zero(self.nvars);
                for (e, c) in &self.terms {
                    let ei = e.entries()[i];
                    if ei == 0 {
                        continue;
                    }
                    let mut ent = e.entries().to_vec();
                    ent[i] -= 1;
                    d.add_term(
                        Exponent::new(ent),
                        c * BigRational::from_integer(ei.into()),
                    );
                }
                d
            })
            .collect()
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, other: Self) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, other: Self) -> SparsePoly {
        self + &(-other)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, other: Self) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    /// Text form conforming to the input grammar, highest degree first:
    /// `x0^4*x1^2 + x0^2*x1^4 - 3*x0^2*x1^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{mag}*{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

impl FromStr for SparsePoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_poly(s, None)
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}
