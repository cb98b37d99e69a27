use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::algebra::{
    enumerate_monomials_in, monomial_count_or_zero, rational_string, DerivativeMultiset, Field,
    Monomial, Polynomial, Scalar,
};
use crate::error::{Error, Result};
use crate::measures::Budget;

/// One variable set of a word: `2^bits` consecutive variables starting after `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    pub offset: u32,
    pub bits: u32,
    pub positive: bool,
}

impl VarSet {
    pub fn size(&self) -> u32 {
        1 << self.bits
    }

    /// Global index of the variable whose string is the `bits`-bit value `b`.
    pub fn var(&self, b: u32) -> u32 {
        self.offset + b + 1
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.size()).map(|b| self.var(b))
    }
}

/// A word with its set-major variable partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    weights: Vec<i64>,
    h: u64,
    sets: Vec<VarSet>,
}

impl Word {
    pub fn new(weights: Vec<i64>, h: u64) -> Result<Word> {
        if weights.is_empty() {
            return Err(Error::InvalidParams("empty word".into()));
        }
        let mut sets = Vec::with_capacity(weights.len());
        let mut offset = 0u32;
        for &w in &weights {
            if w.unsigned_abs() > h {
                return Err(Error::InvalidParams(format!(
                    "weight {w} outside [-{h}, {h}]"
                )));
            }
            if w.unsigned_abs() > 24 {
                return Err(Error::Budget(format!(
                    "set of size 2^{} is too large",
                    w.unsigned_abs()
                )));
            }
            let bits = w.unsigned_abs() as u32;
            sets.push(VarSet {
                offset,
                bits,
                positive: w >= 0,
            });
            offset = offset
                .checked_add(1 << bits)
                .ok_or_else(|| Error::Budget("too many variables".into()))?;
        }
        Ok(Word { weights, h, sets })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn sets(&self) -> &[VarSet] {
        &self.sets
    }

    /// Total number of variables, `Σ 2^{|w_i|}`.
    pub fn n(&self) -> u32 {
        self.sets.iter().map(VarSet::size).sum()
    }

    pub fn prefix_sums(&self) -> Vec<i64> {
        self.weights
            .iter()
            .scan(0i64, |s, &w| {
                *s += w;
                Some(*s)
            })
            .collect()
    }

    pub fn is_unbiased(&self) -> bool {
        self.prefix_sums()
            .iter()
            .all(|s| s.unsigned_abs() <= self.h)
    }

    pub fn sum(&self) -> i64 {
        self.weights.iter().sum()
    }

    fn side_bits(&self, positive: bool) -> u32 {
        self.sets
            .iter()
            .filter(|s| s.positive == positive)
            .map(|s| s.bits)
            .sum()
    }

    /// Variables of the positive sets (`y`).
    pub fn positive_vars(&self) -> Vec<u32> {
        self.sets
            .iter()
            .filter(|s| s.positive)
            .flat_map(|s| s.vars())
            .collect()
    }

    /// Variables of the negative sets (`z`).
    pub fn negative_vars(&self) -> Vec<u32> {
        self.sets
            .iter()
            .filter(|s| !s.positive)
            .flat_map(|s| s.vars())
            .collect()
    }

    /// Set-multilinear monomial on one side whose concatenated string is the
    /// first `Σ bits` bits of `code` (read from the most significant of `len` bits).
    fn side_monomial(&self, positive: bool, code: u64, len: u32) -> Monomial {
        let mut pos = 0u32;
        let mut pairs = Vec::new();
        for s in self.sets.iter().filter(|s| s.positive == positive) {
            let chunk = if s.bits == 0 {
                0
            } else {
                (code >> (len - pos - s.bits)) & ((1u64 << s.bits) - 1)
            };
            pairs.push((s.var(chunk as u32), 1));
            pos += s.bits;
        }
        Monomial::from_pairs(pairs)
    }

    fn side_monomials(&self, positive: bool) -> Vec<Monomial> {
        let len = self.side_bits(positive);
        (0..1u64 << len)
            .map(|c| self.side_monomial(positive, c, len))
            .collect()
    }

    /// All set-multilinear monomials over the positive sets.
    pub fn m_plus(&self) -> Vec<Monomial> {
        self.side_monomials(true)
    }

    /// All set-multilinear monomials over the negative sets.
    pub fn m_minus(&self) -> Vec<Monomial> {
        self.side_monomials(false)
    }

    pub fn to_json(&self) -> Value {
        let sets: Vec<Value> = self
            .sets
            .iter()
            .map(|s| json!({ "offset": s.offset, "size": s.size(), "sign": if s.positive { "+" } else { "-" } }))
            .collect();
        json!({ "word": self.weights, "h": self.h, "n": self.n(), "partition": sets })
    }
}

/// Parameters of the unbiased word: `h' = hk/(d−k)`, `k1 = (d−k)⌈h'⌉ − kh`, `k2 = d − k − k1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordBuildParams {
    pub h: u64,
    pub d: u64,
    pub k: u64,
    pub h_prime: BigRational,
    pub k1: i64,
    pub k2: i64,
}

impl WordBuildParams {
    pub fn to_json(&self) -> Value {
        json!({
            "h": self.h, "d": self.d, "k": self.k,
            "hPrime": rational_string(&self.h_prime), "k1": self.k1, "k2": self.k2,
        })
    }
}

pub fn word_params(h: u64, d: u64, k: u64) -> Result<WordBuildParams> {
    if k < 1 || k >= d {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k < d, got k = {k}, d = {d}"
        )));
    }
    let h_prime = BigRational::new(BigInt::from(h * k), BigInt::from(d - k));
    let ceil = h_prime.ceil().to_integer().to_i64().expect("small");
    let k1 = (d - k) as i64 * ceil - (k * h) as i64;
    let k2 = (d - k) as i64 - k1;
    Ok(WordBuildParams {
        h,
        d,
        k,
        h_prime,
        k1,
        k2,
    })
}

/// `k` copies of `h`, `k1` of `−⌊h'⌋` and `k2` of `−⌈h'⌉`, ordered greedily: a
/// negative weight (the `−⌊h'⌋` copies first) whenever the running sum is
/// non-negative, otherwise `h`.
pub fn construct_unbiased_word(h: u64, d: u64, k: u64) -> Result<Word> {
    let p = word_params(h, d, k)?;
    if p.k1 < 0 || p.k2 < 0 {
        return Err(Error::InvalidParams(format!(
            "k1 = {}, k2 = {}",
            p.k1, p.k2
        )));
    }
    let floor = p.h_prime.floor().to_integer().to_i64().expect("small");
    let ceil = p.h_prime.ceil().to_integer().to_i64().expect("small");
    if ceil as u64 > h {
        return Err(Error::InvalidParams(format!(
            "h' = {} exceeds h = {h}; need k <= d/2",
            p.h_prime
        )));
    }
    let (mut pos, mut neg_floor, mut neg_ceil) = (k, p.k1, p.k2);
    let mut weights = Vec::with_capacity(d as usize);
    let mut sum = 0i64;
    for _ in 0..d {
        let w = if sum >= 0 {
            if neg_floor > 0 {
                neg_floor -= 1;
                -floor
            } else if neg_ceil > 0 {
                neg_ceil -= 1;
                -ceil
            } else {
                return Err(Error::InvalidParams("ran out of negative weights".into()));
            }
        } else if pos > 0 {
            pos -= 1;
            h as i64
        } else {
            return Err(Error::InvalidParams("ran out of positive weights".into()));
        };
        sum += w;
        weights.push(w);
    }
    Word::new(weights, h)
}

/// `P_w = Σ m₊·m₋` over pairs whose bit strings are prefix-related.
pub fn word_polynomial(w: &Word, field: Field, budget: &Budget) -> Result<Polynomial> {
    let (pb, nb) = (w.side_bits(true), w.side_bits(false));
    let len = pb.max(nb);
    if len >= 63 {
        return Err(Error::Budget(format!("2^{len} terms")));
    }
    budget.check_terms(1usize << len)?;
    let n = w.n();
    let one = Scalar::one(field);
    let mut terms = Vec::with_capacity(1 << len);
    for code in 0..1u64 << len {
        let mp = w.side_monomial(true, code >> (len - pb), pb);
        let mn = w.side_monomial(false, code >> (len - nb), nb);
        terms.push((mp.mul(&mn), one.clone()));
    }
    Polynomial::from_terms(n, field, terms)
}

/// `y^ℓ · ∂_{m₊} P_w` for every `m₊ ∈ M₊(w)` and every degree-`ℓ` monomial in the
/// positive variables `y`.
pub fn word_sp_generators(
    w: &Word,
    p: &Polynomial,
    l: u32,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let ys = w.positive_vars();
    let shifts = enumerate_monomials_in(&ys, l);
    let plus = w.m_plus();
    budget.check_terms(shifts.len().saturating_mul(plus.len()))?;
    let mut out = Vec::with_capacity(shifts.len() * plus.len());
    for m in &plus {
        let der = p.derivative(&DerivativeMultiset(m.clone()))?;
        if der.is_zero() {
            continue;
        }
        out.extend(shifts.iter().map(|s| der.mul_monomial(s)));
    }
    Ok(out)
}

/// `M(|y|, ℓ) · |M₋(w)|`.
pub fn word_sp_lower_bound(w: &Word, l: u32) -> BigUint {
    monomial_count_or_zero(w.positive_vars().len() as u64, l as u64)
        * BigUint::from(w.m_minus().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    #[test]
    fn hand_example() {
        let w = construct_unbiased_word(2, 4, 2).unwrap();
        assert_eq!(w.weights(), &[-2, 2, -2, 2]);
        assert_eq!(w.prefix_sums(), vec![-2, 0, -2, 0]);
        assert_eq!(w.n(), 16);
        let p = word_params(2, 4, 2).unwrap();
        assert_eq!((p.k1, p.k2), (0, 2));
    }

    #[test]
    fn two_set_word() {
        let w = Word::new(vec![1, -1], 1).unwrap();
        let p = word_polynomial(&w, Field::Rational, &Budget::default()).unwrap();
        assert_eq!(
            p,
            parse_polynomial("x1*x3 + x2*x4", Some(4), Field::Rational).unwrap()
        );
    }

    #[test]
    fn balanced_word_term_count() {
        let w = Word::new(vec![-1, 2, -1, -2, 2], 2).unwrap();
        assert_eq!(w.sum(), 0);
        let p = word_polynomial(&w, Field::Rational, &Budget::default()).unwrap();
        assert_eq!(p.num_terms(), 1 << 4);
        assert_eq!(p.homogeneity().degree(), Some(5));
        assert_eq!(w.m_minus().len(), 16);
    }

    #[test]
    fn unbalanced_prefix_relation() {
        // positive side has one bit, negative side two: each m₋ pairs with its first bit
        let w = Word::new(vec![1, -2], 2).unwrap();
        let p = word_polynomial(&w, Field::Rational, &Budget::default()).unwrap();
        assert_eq!(p.num_terms(), 4);
        let expected =
            parse_polynomial("x1*x3 + x1*x4 + x2*x5 + x2*x6", Some(6), Field::Rational).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn shifted_generators_are_independent() {
        let w = construct_unbiased_word(1, 2, 1).unwrap();
        let b = Budget::default();
        let p = word_polynomial(&w, Field::Rational, &b).unwrap();
        let gens = word_sp_generators(&w, &p, 2, &b).unwrap();
        let rank = crate::measures::span_rank(&gens, &b).unwrap();
        assert_eq!(BigUint::from(rank), word_sp_lower_bound(&w, 2));
        assert_eq!(rank, 3 * 2);
    }

    #[test]
    fn rejects_bad_k() {
        assert!(construct_unbiased_word(2, 4, 0).is_err());
        assert!(construct_unbiased_word(2, 4, 4).is_err());
        assert!(construct_unbiased_word(2, 5, 3).is_err());
    }
}
