use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// `residue_k(d_1..d_t)` together with an integer tuple attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueValue {
    pub value: BigRational,
    pub minimizers: Vec<i64>,
}

/// Both variants of the residue: the unconstrained minimum and the minimum over
/// tuples with `0 <= k_i <= d_i` and `sum k_i = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub canonical: ResidueValue,
    pub constrained: ResidueValue,
}

fn validate(k: u64, degrees: &[u64]) -> Result<u64> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::Precondition(
            "degrees must be positive and non-empty".into(),
        ));
    }
    let d: u64 = degrees.iter().sum();
    if k >= d {
        return Err(Error::Precondition(format!(
            "k = {k} must be below d = {d}"
        )));
    }
    Ok(d)
}

fn value_from_deviation(total: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(total), BigInt::from(2 * d))
}

/// Closed form: each `k_i` is the nearest integer to `(k/d)·d_i`, halves rounded down.
pub fn residue(k: u64, degrees: &[u64]) -> Result<ResidueValue> {
    let d = validate(k, degrees)?;
    let mut total = 0u64; // sum of |d·k_i − k·d_i|
    let mut minimizers = Vec::with_capacity(degrees.len());
    for &di in degrees {
        let num = k * di;
        let (q, r) = (num / d, num % d);
        if 2 * r <= d {
            minimizers.push(q as i64);
            total += r;
        } else {
            minimizers.push(q as i64 + 1);
            total += d - r;
        }
    }
    Ok(ResidueValue {
        value: value_from_deviation(total, d),
        minimizers,
    })
}

/// Exhaustive search over `k_i ∈ [−window, window]`. The objective is a sum of
/// per-coordinate terms, so scanning each coordinate's range covers the whole box.
pub fn residue_bruteforce(k: u64, degrees: &[u64], window: i64) -> Result<ResidueValue> {
    let d = validate(k, degrees)?;
    if window < d as i64 {
        return Err(Error::Precondition(format!(
            "window {window} below d = {d}"
        )));
    }
    let (k, d) = (k as i64, d as i64);
    let mut total = 0i64;
    let mut minimizers = Vec::with_capacity(degrees.len());
    for &di in degrees {
        let target = k * di as i64;
        let mut best = (i64::MAX, 0i64);
        for ki in -window..=window {
            let dev = (d * ki - target).abs();
            if dev < best.0 {
                best = (dev, ki);
            }
        }
        total += best.0;
        minimizers.push(best.1);
    }
    Ok(ResidueValue {
        value: value_from_deviation(total as u64, d as u64),
        minimizers,
    })
}

/// Minimum over tuples with `0 <= k_i <= d_i` and `sum k_i = k`, by dynamic programming.
pub fn residue_constrained(k: u64, degrees: &[u64]) -> Result<ResidueValue> {
    let d = validate(k, degrees)?;
    let t = degrees.len();
    let ku = k as usize;
    const INF: u64 = u64::MAX;
    // best[i][s]: least deviation using the first i coordinates with partial sum s
    let mut best = vec![vec![INF; ku + 1]; t + 1];
    let mut choice = vec![vec![0u64; ku + 1]; t + 1];
    best[0][0] = 0;
    for (i, &di) in degrees.iter().enumerate() {
        for s in 0..=ku {
            if best[i][s] == INF {
                continue;
            }
            for ki in 0..=di.min((ku - s) as u64) {
                let dev = (d * ki).abs_diff(k * di);
                let c = best[i][s] + dev;
                let ns = s + ki as usize;
                if c < best[i + 1][ns] {
                    best[i + 1][ns] = c;
                    choice[i + 1][ns] = ki;
                }
            }
        }
    }
    let total = best[t][ku];
    let mut minimizers = vec![0i64; t];
    let mut s = ku;
    for i in (1..=t).rev() {
        let ki = choice[i][s];
        minimizers[i - 1] = ki as i64;
        s -= ki as usize;
    }
    Ok(ResidueValue {
        value: value_from_deviation(total, d),
        minimizers,
    })
}

pub fn residue_report(k: u64, degrees: &[u64]) -> Result<ResidueReport> {
    Ok(ResidueReport {
        canonical: residue(k, degrees)?,
        constrained: residue_constrained(k, degrees)?,
    })
}

/// `2·value = Σ |k_i − (k/d)·d_i|` evaluated at the given tuple.
pub fn deviation_at(k: u64, degrees: &[u64], tuple: &[i64]) -> BigRational {
    let d: u64 = degrees.iter().sum();
    let mut s = BigRational::zero();
    for (&di, &ki) in degrees.iter().zip(tuple) {
        let v = BigRational::new(
            BigInt::from(ki * d as i64 - (k * di) as i64),
            BigInt::from(d),
        );
        s += if v < BigRational::zero() { -v } else { v };
    }
    s
}
