use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::tree::BinaryTree;
use crate::algebra::rational_string;
use crate::error::{Error, Result};

/// Degrees `(d_1..d_t)` with suffixes `e_i = d − (d_1 + … + d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<u64>,
    pub suffixes: Vec<u64>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u64>) -> Result<DegreeSequence> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::Precondition(
                "degrees must be positive and non-empty".into(),
            ));
        }
        let d: u64 = degrees.iter().sum();
        let mut suffixes = Vec::with_capacity(degrees.len() + 1);
        let mut e = d;
        suffixes.push(e);
        for &di in &degrees {
            e -= di;
            suffixes.push(e);
        }
        Ok(DegreeSequence { degrees, suffixes })
    }

    pub fn d(&self) -> u64 {
        self.suffixes[0]
    }

    pub fn t(&self) -> usize {
        self.degrees.len()
    }

    /// Lists every violated invariant; empty when the sequence is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let t = self.t();
        let d = self.d();
        if *self.degrees.last().unwrap() != 1 {
            out.push("last degree is not 1".to_string());
        }
        for i in 1..t {
            let (prev, e) = (self.suffixes[i - 1], self.suffixes[i]);
            if !(3 * e > prev && 3 * e <= 2 * prev) {
                out.push(format!(
                    "e_{i} = {e} outside (e_{}/3, 2e_{}/3] with e_{} = {prev}",
                    i - 1,
                    i - 1,
                    i - 1
                ));
            }
        }
        // log_3 d + 1 <= t  and  t <= log_{3/2} d + 1
        let p3 = BigUint::from(3u32).pow(t as u32 - 1);
        if p3 < BigUint::from(d) {
            out.push(format!("t = {t} below log_3 d + 1"));
        }
        if p3 > BigUint::from(d) * (BigUint::from(1u32) << (t - 1)) {
            out.push(format!("t = {t} above log_(3/2) d + 1"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "degrees": self.degrees, "suffixes": self.suffixes })
    }
}

/// Index `j ≥ 1` on the right spine of the last node with more than `d/3`
/// leaves, together with that node's leaf count. `None` for a leaf.
pub fn spine_cut(t: &BinaryTree) -> Option<(usize, u32)> {
    if t.is_leaf() {
        return None;
    }
    let d = t.leaves();
    let spine = t.right_spine();
    let (j, v) = spine
        .iter()
        .enumerate()
        .rev()
        .find(|(_, v)| 3 * v.leaves() > d)?;
    Some((j, v.leaves()))
}

/// Degree sequence of a right-heavy tree.
pub fn deg_seq(t: &BinaryTree) -> Result<DegreeSequence> {
    if !t.is_right_heavy() {
        return Err(Error::Precondition(
            "degree sequence needs a right-heavy tree".into(),
        ));
    }
    let mut degrees = Vec::new();
    let mut cur = t;
    while let Some((j, lv)) = spine_cut(cur) {
        degrees.push((cur.leaves() - lv) as u64);
        cur = cur.right_spine()[j];
    }
    degrees.push(1);
    DegreeSequence::new(degrees)
}

/// Every intermediate value of the `k`-selection procedure for a degree sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UptKTrace {
    pub d: u64,
    pub m: u32,
    /// `j_map[i − 1] = min{j : e_j <= 3^i}` for `i` in `1..=3m`.
    pub j_map: Vec<usize>,
    pub a: Vec<u8>,
    pub b0: Vec<BigRational>,
    pub b1: Vec<BigRational>,
    pub alpha: BigRational,
    pub k: u64,
}

impl UptKTrace {
    pub fn to_json(&self) -> Value {
        let strs = |v: &[BigRational]| v.iter().map(rational_string).collect::<Vec<_>>();
        json!({
            "d": self.d,
            "m": self.m,
            "J": self.j_map,
            "a": self.a,
            "b0": strs(&self.b0),
            "b1": strs(&self.b1),
            "alpha": rational_string(&self.alpha),
            "k": self.k,
        })
    }
}

fn pow27(p: u32) -> BigInt {
    BigInt::from(27u32).pow(p)
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Largest `m >= 0` with `3^{3m+1} <= d`, i.e. `⌊(log_3 d − 1)/3⌋` clamped at 0.
pub(crate) fn upt_m(d: u64) -> u32 {
    let mut m = 0u32;
    while BigUint::from(3u32).pow(3 * (m + 1) + 1) <= BigUint::from(d) {
        m += 1;
    }
    m
}

pub fn upt_k(ds: &DegreeSequence) -> Result<UptKTrace> {
    let d = ds.d();
    let m = upt_m(d);
    let mut j_map = Vec::with_capacity(3 * m as usize);
    for i in 1..=3 * m {
        let bound = BigUint::from(3u32).pow(i);
        let j = ds
            .suffixes
            .iter()
            .position(|&e| BigUint::from(e) <= bound)
            .expect("e_t = 0");
        j_map.push(j);
    }
    let lo = BigRational::new(1.into(), 18.into());
    let hi = BigRational::new(17.into(), 18.into());
    let (mut a, mut b0s, mut b1s) = (Vec::new(), Vec::new(), Vec::new());
    let mut partial = BigRational::zero();
    for i in 1..=m {
        let j = j_map[3 * i as usize - 1];
        let dj1 = *ds.degrees.get(j).ok_or_else(|| {
            Error::Precondition(format!("index {} beyond the degree sequence", j + 1))
        })?;
        let dj1 = BigRational::from_integer(BigInt::from(dj1));
        let b0 = &partial * &dj1;
        let b1 = (&partial + BigRational::new(1.into(), pow27(i))) * &dj1;
        let f = frac(&b0);
        let ai = if f >= lo && f <= hi { 0 } else { 1 };
        if ai == 1 {
            partial += BigRational::new(1.into(), pow27(i));
        }
        a.push(ai);
        b0s.push(b0);
        b1s.push(b1);
    }
    let alpha = partial;
    let k = (&alpha * BigRational::from_integer(BigInt::from(d)))
        .floor()
        .to_integer();
    Ok(UptKTrace {
        d,
        m,
        j_map,
        a,
        b0: b0s,
        b1: b1s,
        alpha,
        k: k.to_u64().expect("0 <= k <= d"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::tree::{all_trees, caterpillar};

    #[test]
    fn hand_examples() {
        assert_eq!(deg_seq(&BinaryTree::Leaf).unwrap().degrees, vec![1]);
        let ds = deg_seq(&caterpillar(3)).unwrap();
        assert_eq!(ds.degrees, vec![1, 1, 1]);
        assert_eq!(ds.suffixes, vec![3, 2, 1, 0]);
        assert!(deg_seq(&BinaryTree::parse("((L,L),L)").unwrap()).is_err());
    }

    #[test]
    fn invariants_small() {
        for n in 1..=8 {
            for t in all_trees(n) {
                let c = t.canonical();
                let ds = deg_seq(&c).unwrap();
                assert_eq!(ds.d(), n as u64);
                assert!(ds.violations().is_empty(), "{c}: {:?}", ds.violations());
            }
        }
    }

    #[test]
    fn upt_k_examples() {
        let tr = upt_k(&DegreeSequence::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!((tr.m, tr.k), (0, 0));
        assert!(tr.alpha.is_zero());
        let ds = deg_seq(&caterpillar(81)).unwrap();
        let tr = upt_k(&ds).unwrap();
        assert_eq!(tr.m, 1);
        assert_eq!(tr.a, vec![1]);
        assert_eq!(tr.alpha, BigRational::new(1.into(), 27.into()));
        assert_eq!(tr.k, 3);
        assert_eq!(upt_m(80), 0);
        assert_eq!(upt_m(3u64.pow(7)), 2);
    }
}
