use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Exponent, SparsePoly};

/// Parse failure with 1-based line/column of the offending character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.src[..self.pos.min(self.src.len())] {
            if c == b'\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    /// `int`, `p/q`, or a decimal like `3.5`; no sign.
    fn number(&mut self) -> Result<BigRational, ParseError> {
        let int_part = self.digits()?;
        match self.peek() {
            Some(b'/') => {
                self.pos += 1;
                let den = self.digits()?;
                let d: BigInt = den.parse().unwrap();
                if d.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                Ok(BigRational::new(int_part.parse().unwrap(), d))
            }
            Some(b'.') => {
                self.pos += 1;
                let frac = self.digits()?;
                let scale = BigInt::from(10u32).pow(frac.len() as u32);
                let num: BigInt =
                    format!("{int_part}{frac}").parse().unwrap();
                Ok(BigRational::new(num, scale))
            }
            _ => Ok(BigRational::from_integer(int_part.parse().unwrap())),
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let d = self.digits()?;
        d.parse()
            .map_err(|_| self.error("variable index out of range"))
    }

    fn power(&mut self) -> Result<u32, ParseError> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.error("exponent out of range"))
    }
}

/// Parse a rational scalar: integer, `p/q`, or decimal, with optional sign.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let mut sc = Scanner::new(s);
    sc.skip_ws();
    let neg = match sc.peek() {
        Some(b'-') => {
            sc.pos += 1;
            true
        }
        Some(b'+') => {
            sc.pos += 1;
            false
        }
        _ => false,
    };
    sc.skip_ws();
    let v = sc.number()?;
    sc.skip_ws();
    if sc.peek().is_some() {
        return Err(sc.error("trailing characters after number"));
    }
    Ok(if neg { -v } else { v })
}

/// Parse the polynomial text grammar (ASCII): terms joined by `+`/`-`;
/// a term is `[coefficient][*]var-powers`; variables are `x0..x{n-1}`;
/// powers via `^`; coefficients are integers, `p/q`, or decimals.
///
/// Example: `x0^4*x1^2 + x0^2*x1^4 - 3*x0^2*x1^2 + 1`.
///
/// With `nvars: None` the variable count is inferred as one past the
/// largest index present (at least 1). With `Some(n)` any `x_i` with
/// `i >= n` is rejected.
pub fn parse_poly(s: &str, nvars: Option<usize>) -> Result<SparsePoly, ParseError> {
    let mut sc = Scanner::new(s);
    // (variable -> power) factors and coefficient per term.
    let mut raw_terms: Vec<(Vec<(usize, u32)>, BigRational)> = Vec::new();
    let mut max_var: Option<usize> = None;

    sc.skip_ws();
    if sc.peek().is_none() {
        return Err(sc.error("empty polynomial"));
    }
    let mut first = true;
    loop {
        sc.skip_ws();
        let sign = match sc.peek() {
            Some(b'+') => {
                sc.pos += 1;
                false
            }
            Some(b'-') => {
                sc.pos += 1;
                true
            }
            None if !first => break,
            _ if first => false,
            _ => return Err(sc.error("expected '+' or '-' between terms")),
        };
        first = false;
        sc.skip_ws();

        let mut coeff = match sc.peek() {
            Some(b'0'..=b'9') => sc.number()?,
            Some(b'x') => BigRational::one(),
            _ => return Err(sc.error("expected a coefficient or a variable")),
        };
        if sign {
            coeff = -coeff;
        }

        let mut factors: Vec<(usize, u32)> = Vec::new();
        loop {
            sc.skip_ws();
            let mark = sc.pos;
            if sc.peek() == Some(b'*') {
                sc.pos += 1;
                sc.skip_ws();
            }
            if sc.peek() == Some(b'x') {
                sc.pos += 1;
                let var = sc.index()?;
                let pow = if sc.peek() == Some(b'^') {
                    sc.pos += 1;
                    sc.power()?
                } else {
                    1
                };
                if let Some(n) = nvars {
                    if var >= n {
                        return Err(sc.error(format!(
                            "variable x{var} exceeds the declared count {n}"
                        )));
                    }
                }
                max_var = Some(max_var.map_or(var, |m: usize| m.max(var)));
                factors.push((var, pow));
            } else {
                if sc.pos != mark {
                    return Err(sc.error("expected a variable after '*'"));
                }
                break;
            }
        }

        raw_terms.push((factors, coeff));
        sc.skip_ws();
        if sc.peek().is_none() {
            break;
        }
    }

    let n = nvars.unwrap_or_else(|| max_var.map_or(1, |m| m + 1));
    let mut poly = SparsePoly::zero(n);
    for (factors, coeff) in raw_terms {
        let mut entries = vec![0u32; n];
        for (var, pow) in factors {
            entries[var] += pow;
        }
        poly.add_term(Exponent::new(entries), coeff);
    }
    Ok(poly)
}
