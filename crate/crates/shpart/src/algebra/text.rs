//! Text format: `3/2*x1^2*x3 - x2`. Whitespace is ignored, variables are `x1..xN`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::scalar::{parse_rational, Field, Scalar};
use crate::error::{Error, Result};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest degree first, lexicographic within a degree
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (j, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if j == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

fn parse_factor(tok: &str, coef: &mut BigRational, pairs: &mut Vec<(u32, u32)>) -> Result<()> {
    if tok.is_empty() {
        return Err(Error::Parse("empty factor".into()));
    }
    if let Some(rest) = tok.strip_prefix('x') {
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (i, Some(e)),
            None => (rest, None),
        };
        let i: u32 = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad variable `{tok}`")))?;
        if i == 0 {
            return Err(Error::Parse("variables start at x1".into()));
        }
        let e: u32 = match exp {
            Some(e) => e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?,
            None => 1,
        };
        pairs.push((i, e));
        Ok(())
    } else {
        *coef *= parse_rational(tok)?;
        Ok(())
    }
}

/// Parses the text format. `nvars` defaults to the largest variable index used.
pub fn parse_polynomial(s: &str, nvars: Option<u32>, field: Field) -> Result<Polynomial> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms: Vec<(Monomial, BigRational)> = Vec::new();
    let bytes = compact.as_bytes();
    let mut start = 0;
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut neg = false;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        neg = bytes[0] == b'-';
        start = 1;
    }
    for i in start..=bytes.len() {
        if i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-' {
            pieces.push((neg, &compact[start..i]));
            if i < bytes.len() {
                neg = bytes[i] == b'-';
            }
            start = i + 1;
        }
    }
    for (neg, body) in pieces {
        if body.is_empty() {
            return Err(Error::Parse(format!("empty term in `{s}`")));
        }
        let mut coef = BigRational::one();
        let mut pairs = Vec::new();
        for tok in body.split('*') {
            parse_factor(tok, &mut coef, &mut pairs)?;
        }
        if neg {
            coef = -coef;
        }
        terms.push((Monomial::from_pairs(pairs), coef));
    }
    let used = terms.iter().map(|(m, _)| m.max_var()).max().unwrap_or(0);
    let n = nvars.unwrap_or(used);
    if used > n {
        return Err(Error::VariableOutOfRange(used, n));
    }
    let mut out = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        if c.is_zero() {
            continue;
        }
        out.push((m, Scalar::from_rational(&c, field)?));
    }
    Polynomial::from_terms(n, field, out)
}

impl std::str::FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Polynomial> {
        parse_polynomial(s, None, Field::Rational)
    }
}

/// Signed rendering helper used by JSON writers.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_negative() {
        format!("-{}", r.abs())
    } else {
        r.to_string()
    }
}
