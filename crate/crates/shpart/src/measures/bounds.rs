use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::residue::residue;
use crate::algebra::monomial_count_or_zero;
use crate::error::{Error, Result};

/// Integer points `(k0, l0)` with `k0 ∈ [0..k]`, `l0 ∈ [0..d−k]` and
/// `k0 + (k/(d−k))·l0 <= k − residue − slack`.
pub fn feasible_region(degrees: &[u64], k: u64, slack: &BigRational) -> Result<Vec<(u64, u64)>> {
    let d: u64 = degrees.iter().sum();
    if k >= d {
        return Err(Error::Precondition(format!(
            "k = {k} must be below d = {d}"
        )));
    }
    let r = residue(k, degrees)?.value + slack;
    let dk = d - k;
    // multiply through by (d − k)
    let rhs = (BigRational::from_integer(BigInt::from(k)) - r)
        * BigRational::from_integer(BigInt::from(dk));
    let mut out = Vec::new();
    for k0 in 0..=k {
        for l0 in 0..=dk {
            let lhs = BigRational::from_integer(BigInt::from(k0 * dk + k * l0));
            if lhs <= rhs {
                out.push((k0, l0));
            }
        }
    }
    Ok(out)
}

fn prefactor(t: usize, d: u64) -> BigUint {
    (BigUint::one() << t) * BigUint::from(d) * BigUint::from(d)
}

/// `2^t · d² · max M(n,k0)·M(n,l0+l)` over the feasible region.
pub fn product_sp_bound(n: u64, degrees: &[u64], k: u64, l: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let d: u64 = degrees.iter().sum();
    let region = feasible_region(degrees, k, &BigRational::zero())?;
    let best = region
        .iter()
        .map(|&(k0, l0)| monomial_count_or_zero(n, k0) * monomial_count_or_zero(n, l0 + l))
        .max()
        .unwrap_or_default();
    Ok(prefactor(degrees.len(), d) * best)
}

/// `2^t · d² · max M(n,k0)·M(n0,l0)` over the feasible region.
pub fn product_app_bound(n: u64, degrees: &[u64], k: u64, n0: u64) -> Result<BigUint> {
    if n == 0 || n0 == 0 {
        return Err(Error::Precondition("n and n0 must be positive".into()));
    }
    let d: u64 = degrees.iter().sum();
    let region = feasible_region(degrees, k, &BigRational::zero())?;
    let best = region
        .iter()
        .map(|&(k0, l0)| monomial_count_or_zero(n, k0) * monomial_count_or_zero(n0, l0))
        .max()
        .unwrap_or_default();
    Ok(prefactor(degrees.len(), d) * best)
}

/// `min{M(n,k)·M(n,l), M(n,d−k+l)}` for a homogeneous degree-`d` polynomial.
pub fn ambient_sp_bound(n: u64, d: u64, k: u64, l: u64) -> BigUint {
    if k > d {
        return BigUint::zero();
    }
    let a = monomial_count_or_zero(n, k) * monomial_count_or_zero(n, l);
    let b = monomial_count_or_zero(n, d - k + l);
    a.min(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor_contains_top_corner() {
        // residue 0 for t = 1, so (k, 0) is feasible
        for d in 2..=6u64 {
            for k in 0..d {
                let region = feasible_region(&[d], k, &BigRational::zero()).unwrap();
                assert!(region.contains(&(k, 0)));
                let b = product_sp_bound(3, &[d], k, 1).unwrap();
                let floor = BigUint::from(2 * d * d)
                    * monomial_count_or_zero(3, k)
                    * monomial_count_or_zero(3, 1);
                assert!(b >= floor);
            }
        }
    }

    #[test]
    fn k_zero_collapses() {
        let b = product_sp_bound(3, &[2, 2], 0, 2).unwrap();
        assert_eq!(
            b,
            BigUint::from(4u32 * 16) * monomial_count_or_zero(3, 2 + 4)
        );
    }

    #[test]
    fn app_bound_monotone_in_n0() {
        for n0 in 1..6u64 {
            let a = product_app_bound(4, &[1, 2, 3], 3, n0).unwrap();
            let b = product_app_bound(4, &[1, 2, 3], 3, n0 + 1).unwrap();
            assert!(a <= b);
        }
        // a single target variable contributes a shift factor of one
        let a = product_app_bound(3, &[1, 1, 1, 1], 2, 1).unwrap();
        let region = feasible_region(&[1, 1, 1, 1], 2, &BigRational::zero()).unwrap();
        let best = region
            .iter()
            .map(|&(k0, _)| monomial_count_or_zero(3, k0))
            .max()
            .unwrap();
        assert_eq!(a, BigUint::from(16u32 * 16) * best);
    }
}
