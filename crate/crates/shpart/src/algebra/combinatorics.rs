use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use crate::error::{Error, Result};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r *= n - i;
        r /= i + 1;
    }
    r
}

/// Binomial with a signed top argument; zero outside `0 <= k <= n`.
pub fn binomial_signed(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        BigUint::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// `M(a, b) = C(a+b-1, b)`, the number of degree-`b` monomials in `a` variables.
pub fn count_monomials(a: u64, b: u64) -> Result<BigUint> {
    if a == 0 {
        if b == 0 {
            return Ok(BigUint::one());
        }
        return Err(Error::Domain(format!("M(0, {b}) is undefined")));
    }
    Ok(binomial(a + b - 1, b))
}

/// `M(a, b)` extended by `M(0, 0) = 1`, `M(0, b) = 0`: the number of degree-`b`
/// monomials over an empty variable set.
pub fn monomial_count_or_zero(a: u64, b: u64) -> BigUint {
    if a == 0 {
        if b == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    } else {
        binomial(a + b - 1, b)
    }
}

/// All degree-`deg` monomials in `x1..xn`, ascending in the graded-lex order.
pub fn enumerate_monomials(n: u32, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    let mut dense = vec![0u32; n as usize];
    fill(&mut dense, 0, deg, &mut out);
    out
}

fn fill(dense: &mut [u32], pos: usize, left: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == dense.len() {
        dense[pos] = left;
        out.push(Monomial::from_dense(dense));
        dense[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        dense[pos] = e;
        fill(dense, pos + 1, left - e, out);
    }
    dense[pos] = 0;
}

/// Degree-`deg` monomials over the given variable list (in the order of the list).
pub fn enumerate_monomials_in(vars: &[u32], deg: u32) -> Vec<Monomial> {
    enumerate_monomials(vars.len() as u32, deg)
        .into_iter()
        .map(|m| m.map_vars(|j| vars[(j - 1) as usize]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn small_counts() {
        assert_eq!(count_monomials(3, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(count_monomials(7, 0).unwrap(), BigUint::one());
        assert_eq!(count_monomials(5, 3).unwrap(), BigUint::from(35u32));
        assert!(count_monomials(0, 2).is_err());
    }

    #[test]
    fn enumeration_order_and_size() {
        let v = enumerate_monomials(2, 2);
        let s: Vec<String> = v.iter().map(|m| m.to_string()).collect();
        assert_eq!(s, vec!["x1^2", "x1*x2", "x2^2"]);
        assert_eq!(enumerate_monomials(3, 0), vec![Monomial::one()]);
        for n in 1..=8u32 {
            for d in 0..=8u32 {
                let v = enumerate_monomials(n, d);
                assert_eq!(
                    v.len(),
                    count_monomials(n as u64, d as u64)
                        .unwrap()
                        .to_usize()
                        .unwrap()
                );
                assert!(v.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
