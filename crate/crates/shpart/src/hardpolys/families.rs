use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::algebra::{
    enumerate_monomials_in, monomial_count_or_zero, Field, LinearMap, Monomial, Polynomial, Scalar,
};
use crate::decompose::low_depth_k;
use crate::error::{Error, Result};
use crate::measures::Budget;

/// Index of entry `(i, j)` of matrix `m` (all 1-based) among `d·n²` variables.
pub fn imm_variable(n: u32, m: u32, i: u32, j: u32) -> u32 {
    (m - 1) * n * n + (i - 1) * n + j
}

/// The `(1,1)` entry of a product of `d` generic `n × n` matrices.
pub fn imm_polynomial(n: u32, d: u32, field: Field, budget: &Budget) -> Result<Polynomial> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParams("n and d must be positive".into()));
    }
    let count = (n as u128).checked_pow(d - 1).unwrap_or(u128::MAX);
    budget.check_terms(usize::try_from(count).unwrap_or(usize::MAX))?;
    let nvars = d * n * n;
    let one = Scalar::one(field);
    let mut p = Polynomial::zero(nvars, field);
    // inner path indices i_1..i_{d-1}, with i_0 = i_d = 1
    let mut path = vec![1u32; d as usize - 1];
    loop {
        let mut pairs = Vec::with_capacity(d as usize);
        let mut prev = 1;
        for m in 1..=d {
            let next = if m == d { 1 } else { path[m as usize - 1] };
            pairs.push((imm_variable(n, m, prev, next), 1));
            prev = next;
        }
        p.add_term(Monomial::from_pairs(pairs), one.clone());
        let mut pos = 0;
        loop {
            if pos == path.len() {
                return Ok(p);
            }
            if path[pos] < n {
                path[pos] += 1;
                break;
            }
            path[pos] = 1;
            pos += 1;
        }
    }
}

/// `P_σ` together with the parameters that define it.
#[derive(Clone, Debug)]
pub struct PSigma {
    pub polynomial: Polynomial,
    pub n: u32,
    pub d: u32,
    pub delta: u32,
    pub k: u32,
    pub n0: u32,
    pub n1: u32,
    /// Projection killing `y = x_1..x_{n1}` and sending `x_{n1+j}` to `z_j`.
    pub projection: LinearMap,
}

impl PSigma {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "d": self.d, "delta": self.delta, "k": self.k,
            "n0": self.n0, "n1": self.n1, "terms": self.polynomial.num_terms(),
        })
    }
}

/// `⌊2(d−k)·(n/k)^{k/(d−k)}⌋`, as the largest `m` with `m^{d−k}·k^k <= (2(d−k))^{d−k}·n^k`.
fn sigma_n0(n: u32, d: u32, k: u32) -> BigUint {
    let e = d - k;
    let rhs = BigUint::from(2 * e).pow(e) * BigUint::from(n).pow(k);
    let kk = BigUint::from(k).pow(k);
    let fits = |m: &BigUint| m.pow(e) * &kk <= rhs;
    let (mut lo, mut hi) = (BigUint::from(0u32), BigUint::from(1u32));
    while fits(&hi) {
        lo = hi.clone();
        hi <<= 1;
    }
    while &hi - &lo > BigUint::from(1u32) {
        let mid = (&lo + &hi) >> 1;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `P_σ = Σ_{m ∈ M_y} m·σ(m)` with `k` from the low-depth parameters and `σ` the
/// rank-order injection of degree-`k` `y`-monomials into degree-`(d−k)` `z`-monomials.
pub fn p_sigma(n: u32, d: u32, delta: u32, field: Field, budget: &Budget) -> Result<PSigma> {
    if d < 2 || delta == 0 {
        return Err(Error::InvalidParams("need d >= 2 and delta >= 1".into()));
    }
    let k = u32::try_from(low_depth_k(d as u64, delta).k).expect("k <= d");
    if k == 0 {
        return Err(Error::InvalidParams("k = 0 for these parameters".into()));
    }
    let n0 = sigma_n0(n, d, k);
    let n0 = match u32::try_from(&n0) {
        Ok(v) if v >= 1 && v < n => v,
        _ => {
            return Err(Error::InvalidParams(format!(
                "n0 = {n0} outside [1, n) for n = {n}"
            )))
        }
    };
    let n1 = n - n0;
    let my = monomial_count_or_zero(n1 as u64, k as u64);
    let mz = monomial_count_or_zero(n0 as u64, (d - k) as u64);
    if my > mz {
        return Err(Error::InvalidParams(format!(
            "|M_y| = {my} exceeds |M_z| = {mz}"
        )));
    }
    budget.check_terms(usize::try_from(&my).unwrap_or(usize::MAX))?;
    let yvars: Vec<u32> = (1..=n1).collect();
    let zvars: Vec<u32> = (n1 + 1..=n).collect();
    let ys = enumerate_monomials_in(&yvars, k);
    // σ is the rank-order injection; only the first |M_y| z-monomials are needed
    let zs = first_monomials(&zvars, d - k, ys.len());
    let one = Scalar::one(field);
    let mut p = Polynomial::zero(n, field);
    for (my, mz) in ys.iter().zip(&zs) {
        p.add_term(my.mul(mz), one.clone());
    }
    let projection =
        LinearMap::coordinate(n, n0, field, |i| if i > n1 { Some(i - n1) } else { None });
    Ok(PSigma {
        polynomial: p,
        n,
        d,
        delta,
        k,
        n0,
        n1,
        projection,
    })
}

/// The first `count` monomials of degree `deg` in `vars`, in the graded order used
/// by [`enumerate_monomials_in`], without materializing the rest.
fn first_monomials(vars: &[u32], deg: u32, count: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(count);
    let mut exps = vec![0u32; vars.len()];
    fill(vars, &mut exps, 0, deg, count, &mut out);
    out
}

fn fill(
    vars: &[u32],
    exps: &mut Vec<u32>,
    pos: usize,
    left: u32,
    count: usize,
    out: &mut Vec<Monomial>,
) {
    if out.len() == count {
        return;
    }
    if pos + 1 == vars.len() {
        exps[pos] = left;
        out.push(Monomial::from_pairs(
            vars.iter().copied().zip(exps.iter().copied()),
        ));
        exps[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        exps[pos] = e;
        fill(vars, exps, pos + 1, left - e, count, out);
        if out.len() == count {
            break;
        }
    }
    exps[pos] = 0;
}

/// `x_1⋯x_n` and the map `x_i ↦ z_1 + i·z_2 + ⋯ + i^{n0−1}·z_{n0}`.
pub fn monomial_and_vandermonde(n: u32, n0: u32, field: Field) -> Result<(Polynomial, LinearMap)> {
    if n == 0 || n0 == 0 {
        return Err(Error::InvalidParams("n and n0 must be positive".into()));
    }
    if let Field::Prime(p) = field {
        if p <= n as u64 {
            return Err(Error::InvalidParams(format!(
                "F_{p} has fewer than {n} nonzero points"
            )));
        }
    }
    let p = Polynomial::monomial(
        Monomial::from_pairs((1..=n).map(|i| (i, 1))),
        Scalar::one(field),
        n,
    );
    let rows: Vec<Vec<i64>> = (1..=n as i64)
        .map(|a| (0..n0).map(|j| a.pow(j)).collect())
        .collect();
    let l = LinearMap::from_int_matrix(n0, &rows, field)?;
    Ok((p, l))
}

/// `(x_1² + ⋯ + x_n²)^e`.
pub fn power_of_quadratic(n: u32, e: u32, field: Field, budget: &Budget) -> Result<Polynomial> {
    if n == 0 || e == 0 {
        return Err(Error::InvalidParams("n and e must be positive".into()));
    }
    let terms = monomial_count_or_zero(n as u64, e as u64);
    budget.check_terms(usize::try_from(&terms).unwrap_or(usize::MAX))?;
    let mut q = Polynomial::zero(n, field);
    for i in 1..=n {
        q.add_term(Monomial::var_pow(i, 2), Scalar::one(field));
    }
    Ok(q.pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_monomials, parse_polynomial};
    use crate::measures::{app_with_map, pd_measure, MeasureConfig};

    #[test]
    fn imm_examples() {
        let b = Budget::default();
        let p = imm_polynomial(1, 3, Field::Rational, &b).unwrap();
        assert_eq!(
            p,
            parse_polynomial("x1*x2*x3", Some(3), Field::Rational).unwrap()
        );
        let p = imm_polynomial(2, 2, Field::Rational, &b).unwrap();
        // x^(1)_11 = x1, x^(1)_12 = x2, x^(2)_11 = x5, x^(2)_21 = x7
        assert_eq!(
            p,
            parse_polynomial("x1*x5 + x2*x7", Some(8), Field::Rational).unwrap()
        );
        assert_eq!(
            imm_polynomial(3, 4, Field::Rational, &b)
                .unwrap()
                .num_terms(),
            27
        );
    }

    #[test]
    fn p_sigma_small() {
        let ps = p_sigma(20, 4, 2, Field::Rational, &Budget::default()).unwrap();
        assert_eq!((ps.k, ps.n0, ps.n1), (1, 16, 4));
        assert_eq!(ps.polynomial.num_terms(), 4);
        assert_eq!(ps.polynomial.homogeneity().degree(), Some(4));
        let r = app_with_map(
            &ps.polynomial,
            ps.k,
            &ps.projection,
            &MeasureConfig::default(),
        )
        .unwrap();
        assert_eq!(r.dimension, 4);
    }

    #[test]
    fn n0_matches_float() {
        for (n, d, k) in [(20u32, 4u32, 1u32), (50, 6, 2), (100, 8, 3), (7, 5, 2)] {
            let f = 2.0 * (d - k) as f64 * (n as f64 / k as f64).powf(k as f64 / (d - k) as f64);
            assert_eq!(sigma_n0(n, d, k), BigUint::from(f.floor() as u64));
        }
    }

    #[test]
    fn first_monomials_prefix() {
        let vars = [3, 4, 5];
        let all = enumerate_monomials_in(&vars, 3);
        assert_eq!(first_monomials(&vars, 3, 4), all[..4].to_vec());
        assert_eq!(first_monomials(&vars, 3, all.len()), all);
        assert_eq!(enumerate_monomials(3, 2).len(), 6);
    }

    #[test]
    fn quadratic_power() {
        let b = Budget::default();
        let q = power_of_quadratic(2, 1, Field::Rational, &b).unwrap();
        assert_eq!(
            q,
            parse_polynomial("x1^2 + x2^2", Some(2), Field::Rational).unwrap()
        );
        let q = power_of_quadratic(3, 2, Field::Rational, &b).unwrap();
        assert_eq!(
            pd_measure(&q, 1, &MeasureConfig::default())
                .unwrap()
                .dimension,
            3
        );
    }

    #[test]
    fn vandermonde_example() {
        let (p, l) = monomial_and_vandermonde(5, 3, Field::Rational).unwrap();
        let r = app_with_map(&p, 2, &l, &MeasureConfig::default()).unwrap();
        assert_eq!(r.dimension, 10);
    }
}
