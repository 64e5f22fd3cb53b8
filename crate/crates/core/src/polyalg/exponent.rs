use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial: `[a0, a1, ...]` stands for
/// `x0^a0 * x1^a1 * ...`. The length is the variable count.
///
/// Ordered graded-lexicographically: lower total degree first, and within
/// the same degree higher powers of earlier variables first, so for two
/// variables the order is `1, x0, x1, x0^2, x0*x1, x1^2, ...`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    /// The constant monomial in `nvars` variables.
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    /// `power * e_i`, i.e. `x_i^power`.
    pub fn axis(nvars: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        Exponent(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True iff every entry is divisible by 2.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|&e| e % 2 == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum (monomial product).
    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.0.len(), other.0.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise doubling (the exponent of the monomial square).
    pub fn double(&self) -> Exponent {
        Exponent(self.0.iter().map(|&e| 2 * e).collect())
    }

    /// Halve an even exponent.
    pub fn half(&self) -> Option<Exponent> {
        if self.is_even() {
            Some(Exponent(self.0.iter().map(|&e| e / 2).collect()))
        } else {
            None
        }
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            // Within a degree: reversed entry comparison puts higher powers
            // of x0 first (grlex with x0 > x1 > ...).
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Exponent {
    /// Monomial text form, e.g. `x0^4*x1^2`; the constant monomial is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}
