use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use super::is_prime;
use crate::algebra::{
    binomial, enumerate_monomials, monomial_count_or_zero, Field, Monomial, Polynomial, Scalar,
};
use crate::error::{Error, Result};
use crate::measures::Budget;

/// Index of `x_{i,c}` for `i ∈ [1..d]`, `c ∈ [0..q)`.
pub fn nw_variable(q: u64, i: u64, c: u64) -> u32 {
    ((i - 1) * q + c + 1) as u32
}

/// All polynomials of degree `< k` over `F_q`, as coefficient vectors.
fn low_degree_polys(q: u64, k: u64) -> impl Iterator<Item = Vec<u64>> {
    let count = q.pow(k as u32);
    (0..count).map(move |mut code| {
        (0..k)
            .map(|_| {
                let c = code % q;
                code /= q;
                c
            })
            .collect()
    })
}

fn eval_mod(h: &[u64], x: u64, q: u64) -> u64 {
    h.iter().rev().fold(0, |acc, &c| (acc * (x % q) + c) % q)
}

/// `Π_{i ∈ positions} x_{i,h(i)}` with `i` read in `F_q`.
fn design_monomial(h: &[u64], q: u64, positions: impl Iterator<Item = u64>) -> Monomial {
    Monomial::from_pairs(positions.map(|i| (nw_variable(q, i, eval_mod(h, i, q)), 1)))
}

fn check_params(q: u64, d: u64, k: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::InvalidParams(format!("q = {q} is not prime")));
    }
    if d == 0 || k == 0 || k > d {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= d, got d = {d}, k = {k}"
        )));
    }
    if q.checked_pow(k as u32).is_none_or(|c| c > 1 << 24) {
        return Err(Error::Budget(format!("{q}^{k} terms")));
    }
    Ok(())
}

/// `NW_{q,d,k} = Σ_{deg h < k} Π_i x_{i,h(i)}` over the `d × q` grid; requires `d <= q`
/// so that the evaluation points are distinct.
pub fn nw_polynomial(q: u64, d: u64, k: u64, field: Field, budget: &Budget) -> Result<Polynomial> {
    check_params(q, d, k)?;
    if d > q {
        return Err(Error::InvalidParams(format!(
            "d = {d} exceeds q = {q}; evaluation points would repeat"
        )));
    }
    nw_polynomial_wrapping(q, d, k, field, budget)
}

/// As [`nw_polynomial`] but also for `d > q`, where `h` is evaluated at `i mod q`
/// and distinct `h` may share values at repeated points.
pub fn nw_polynomial_wrapping(
    q: u64,
    d: u64,
    k: u64,
    field: Field,
    budget: &Budget,
) -> Result<Polynomial> {
    check_params(q, d, k)?;
    budget.check_terms(q.pow(k as u32) as usize)?;
    let n = (q * d) as u32;
    let one = Scalar::one(field);
    let mut p = Polynomial::zero(n, field);
    for h in low_degree_polys(q, k) {
        p.add_term(design_monomial(&h, q, 1..=d), one.clone());
    }
    Ok(p)
}

/// Counting quantities behind the shifted-partials bound for `NW`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NwCountReport {
    pub q: u64,
    pub d: u64,
    pub k: u64,
    pub l: u64,
    /// `q^k · C(qd+ℓ−1, qd−1)`.
    pub sum_t_h: BigUint,
    /// `χ(r) = q^{2k−r} · C(d−k, r) · C(qd+ℓ−d+k+r−1, qd−1)` for `r ∈ [0..k−1]`.
    pub chi: Vec<BigUint>,
    pub chi_sum: BigUint,
    /// `Σ|T_h| − Σ_r χ(r)`.
    pub ie_lower: BigInt,
    /// Σ over ordered pairs `h1 ≠ h2` of `|T_{h1} ∩ T_{h2}|`, by enumeration.
    pub pairwise_exact: Option<BigUint>,
    /// `Σ|T_h|` by enumeration.
    pub direct_sum_t_h: Option<usize>,
    /// `|T|` by enumeration.
    pub direct_t: Option<usize>,
}

impl NwCountReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q, "d": self.d, "k": self.k, "l": self.l,
            "sumTh": self.sum_t_h.to_string(),
            "chi": self.chi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "chiSum": self.chi_sum.to_string(),
            "ieLower": self.ie_lower.to_string(),
            "pairwiseExact": self.pairwise_exact.as_ref().map(|c| c.to_string()),
            "directSumTh": self.direct_sum_t_h,
            "directT": self.direct_t,
        })
    }
}

/// Evaluates the counting formulas and, when `enumerate` is set, the direct
/// values on the `d × q` grid with `h` evaluated at `i mod q`.
pub fn nw_count_identities(
    q: u64,
    d: u64,
    k: u64,
    l: u64,
    enumerate: bool,
) -> Result<NwCountReport> {
    check_params(q, d, k)?;
    if k >= d {
        return Err(Error::InvalidParams("need k < d".into()));
    }
    let qd = q * d;
    let sum_t_h = BigUint::from(q).pow(k as u32) * binomial(qd + l - 1, qd - 1);
    let chi: Vec<BigUint> = (0..k)
        .map(|r| {
            BigUint::from(q).pow((2 * k - r) as u32)
                * binomial(d - k, r)
                * binomial(qd + l + k + r - d - 1, qd - 1)
        })
        .collect();
    let chi_sum: BigUint = chi.iter().sum();
    let ie_lower = BigInt::from(sum_t_h.clone()) - BigInt::from(chi_sum.clone());

    let (mut pairwise_exact, mut direct_sum_t_h, mut direct_t) = (None, None, None);
    if enumerate {
        let s: Vec<Monomial> = low_degree_polys(q, k)
            .map(|h| design_monomial(&h, q, k + 1..=d))
            .collect();
        let shifts = enumerate_monomials(qd as u32, l as u32);
        let mut t = HashSet::new();
        let mut per_h = 0;
        for m in &s {
            let th: HashSet<Monomial> = shifts.iter().map(|sh| m.mul(sh)).collect();
            per_h += th.len();
            t.extend(th);
        }
        direct_sum_t_h = Some(per_h);
        direct_t = Some(t.len());
        let target = l + d - k;
        let mut pw = BigUint::default();
        for (a, ma) in s.iter().enumerate() {
            for (b, mb) in s.iter().enumerate() {
                if a == b {
                    continue;
                }
                let lcm = lcm(ma, mb);
                let free = target.checked_sub(lcm.degree() as u64);
                if let Some(free) = free {
                    pw += monomial_count_or_zero(qd, free);
                }
            }
        }
        pairwise_exact = Some(pw);
    }
    Ok(NwCountReport {
        q,
        d,
        k,
        l,
        sum_t_h,
        chi,
        chi_sum,
        ie_lower,
        pairwise_exact,
        direct_sum_t_h,
        direct_t,
    })
}

fn lcm(a: &Monomial, b: &Monomial) -> Monomial {
    let mut pairs: Vec<(u32, u32)> = a.pairs().to_vec();
    for &(v, e) in b.pairs() {
        match pairs.iter_mut().find(|(w, _)| *w == v) {
            Some(p) => p.1 = p.1.max(e),
            None => pairs.push((v, e)),
        }
    }
    Monomial::from_pairs(pairs)
}
