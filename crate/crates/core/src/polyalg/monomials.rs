use super::{Exponent, PolyAlgError};

/// Dimension of the space of polynomials of degree at most `d` in `n`
/// variables: `binom(n+d, n)`, with overflow detection.
pub fn space_dim(n: usize, d: u32) -> Result<usize, PolyAlgError> {
    assert!(n >= 1, "need at least one variable");
    let overflow = || PolyAlgError::Overflow { n, d };
    // binom(n+d, min(n, d)) by the usual multiplicative scheme, exact at
    // every step since the running value is always a binomial coefficient.
    let k = (n as u128).min(d as u128);
    let total = n as u128 + d as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc
            .checked_mul(total - k + i)
            .ok_or_else(overflow)?
            / i;
    }
    usize::try_from(acc).map_err(|_| overflow())
}

/// All exponents `alpha` with `|alpha| <= d` in `n` variables, in graded
/// lexicographic order. The length equals [`space_dim`]`(n, d)`.
pub fn monomial_vector(n: usize, d: u32) -> Result<Vec<Exponent>, PolyAlgError> {
    let len = space_dim(n, d)?;
    let mut out = Vec::with_capacity(len);
    let mut current = vec![0u32; n];
    enumerate(&mut current, 0, d, &mut out);
    out.sort();
    debug_assert_eq!(out.len(), len);
    Ok(out)
}

fn enumerate(current: &mut Vec<u32>, var: usize, budget: u32, out: &mut Vec<Exponent>) {
    if var == current.len() {
        out.push(Exponent::new(current.clone()));
        return;
    }
    for e in 0..=budget {
        current[var] = e;
        enumerate(current, var + 1, budget - e, out);
    }
    current[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_degree_two() {
        // 1, x, x^2
        let v = monomial_vector(1, 2).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(space_dim(1, 2).unwrap(), 3);
        assert_eq!(v[0], Exponent::new(vec![0]));
        assert_eq!(v[1], Exponent::new(vec![1]));
        assert_eq!(v[2], Exponent::new(vec![2]));
    }

    #[test]
    fn bivariate_degree_one() {
        let v = monomial_vector(2, 1).unwrap();
        let expect: Vec<Exponent> = [[0, 0], [1, 0], [0, 1]]
            .iter()
            .map(|e| Exponent::new(e.to_vec()))
            .collect();
        assert_eq!(v, expect);
    }

    #[test]
    fn bivariate_degree_two_count() {
        // Oracle: brute-force count of lattice points with |alpha| <= 2.
        let mut count = 0;
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                if a + b <= 2 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 6);
        assert_eq!(monomial_vector(2, 2).unwrap().len(), 6);
    }

    #[test]
    fn degree_zero() {
        assert_eq!(space_dim(7, 0).unwrap(), 1);
        assert_eq!(monomial_vector(7, 0).unwrap(), vec![Exponent::zero(7)]);
    }

    #[test]
    fn three_vars_degree_two() {
        // Oracle: count lattice points |alpha| <= 2 in 3 variables.
        let mut count = 0;
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    if a + b + c <= 2 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 10);
        assert_eq!(space_dim(3, 2).unwrap(), 10);
    }

    #[test]
    fn overflow_detected() {
        assert!(matches!(
            space_dim(40, 100),
            Err(PolyAlgError::Overflow { .. })
        ));
    }

    #[test]
    fn length_matches_dimension() {
        for n in 1..=5 {
            for d in 0..=5 {
                assert_eq!(
                    monomial_vector(n, d).unwrap().len(),
                    space_dim(n, d).unwrap(),
                    "n={n} d={d}"
                );
            }
        }
    }
}
