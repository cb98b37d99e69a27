//! Sum-of-products decompositions of low-depth and UPT formulas, with the checks
//! and parameter choices that accompany them.

mod low_depth;
mod upt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{rational_string, Field, Polynomial};
use crate::error::Result;
use crate::measures::residue;

pub use low_depth::{low_depth_decompose, normalize_stats, NormalizedStats};
pub use upt::upt_log_product_decompose;

/// `f = Σ_i Π_j Q_{i,j}` with every factor homogeneous.
#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub nvars: u32,
    pub summands: Vec<Vec<Polynomial>>,
    /// Gate count of the input formula.
    pub source_size: usize,
    /// Gate count after normalization (alternating layers, or binarization for UPT).
    pub normalized_size: usize,
}

impl ProductDecomposition {
    pub fn s(&self) -> usize {
        self.summands.len()
    }

    pub fn degrees(&self, i: usize) -> Vec<u64> {
        self.summands[i]
            .iter()
            .map(|q| q.degree().unwrap_or(0) as u64)
            .collect()
    }

    pub fn recombine(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.nvars, Field::Rational);
        for s in &self.summands {
            acc = &acc + &Polynomial::product(self.nvars, Field::Rational, s.iter());
        }
        acc
    }

    pub fn factors_homogeneous(&self) -> bool {
        self.summands
            .iter()
            .flatten()
            .all(|q| q.homogeneity().degree().is_some())
    }

    pub fn to_json(&self) -> Value {
        let summands: Vec<Value> = (0..self.s())
            .map(|i| {
                json!({
                    "degrees": self.degrees(i),
                    "factors": self.summands[i].iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "s": self.s(),
            "sourceSize": self.source_size,
            "normalizedSize": self.normalized_size,
            "summands": summands,
        })
    }
}

/// Parameters `τ = ⌊d^{2^{1−Δ}}⌋`, `α = Σ_{ν<Δ} (−1)^ν / τ^{2^ν − 1}`, `k = ⌊αd/(1+α)⌋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDepthParams {
    pub d: u64,
    pub delta: u32,
    pub tau: u64,
    pub alpha: BigRational,
    pub k: u64,
    /// Set when `τ = 1`, where the alternating sum no longer tracks the degrees.
    pub degenerate: bool,
}

impl LowDepthParams {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d, "delta": self.delta, "tau": self.tau,
            "alpha": rational_string(&self.alpha), "k": self.k, "degenerate": self.degenerate,
        })
    }
}

/// Largest integer `r` with `r^{2^e} <= d`.
pub(crate) fn int_root_pow2(d: u64, e: u32) -> u64 {
    let target = BigUint::from(d);
    let exp = 1u32 << e;
    let (mut lo, mut hi) = (0u64, d.max(1));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if BigUint::from(mid).pow(exp) <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

pub fn low_depth_k(d: u64, delta: u32) -> LowDepthParams {
    assert!(
        d >= 1 && delta >= 1,
        "low_depth_k needs d >= 1 and delta >= 1"
    );
    let tau = int_root_pow2(d, delta - 1);
    let mut alpha = BigRational::zero();
    for nu in 0..delta {
        let term = BigRational::new(BigInt::one(), BigInt::from(tau).pow((1u32 << nu) - 1));
        if nu % 2 == 0 {
            alpha += term;
        } else {
            alpha -= term;
        }
    }
    let d_r = BigRational::from_integer(BigInt::from(d));
    let k = (&alpha * &d_r / (BigRational::one() + &alpha))
        .floor()
        .to_integer();
    let k = u64::try_from(k).expect("0 <= k <= d");
    LowDepthParams {
        d,
        delta,
        tau,
        alpha,
        k,
        degenerate: tau == 1,
    }
}

/// Per-summand residues at order `k` and whether all reach `gamma`.
#[derive(Clone, Debug)]
pub struct ResidueFloor {
    pub holds: bool,
    pub minimum: Option<BigRational>,
    pub residues: Vec<BigRational>,
}

pub fn check_residue_floor(
    decomp: &ProductDecomposition,
    k: u64,
    gamma: &BigRational,
) -> Result<ResidueFloor> {
    let mut residues = Vec::with_capacity(decomp.s());
    for i in 0..decomp.s() {
        residues.push(residue(k, &decomp.degrees(i))?.value);
    }
    let minimum = residues.iter().min().cloned();
    let holds = residues.iter().all(|r| r >= gamma);
    Ok(ResidueFloor {
        holds,
        minimum,
        residues,
    })
}

/// Which disjunct of the structural condition a summand satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LdsVerdict {
    /// At least `d^{2^{1−Δ}}` linear factors.
    Linear {
        count: usize,
    },
    /// At least `d^{2^{1−δ}} − 1` factors of degree `≈₂ d^{2^{1−δ}}`.
    Balanced {
        delta: u32,
        count: usize,
    },
    Fails,
}

#[derive(Clone, Debug)]
pub struct LdsReport {
    pub holds: bool,
    pub verdicts: Vec<LdsVerdict>,
}

fn pow_big(b: u64, e: u32) -> BigUint {
    BigUint::from(b).pow(e)
}

/// Exact check of the structural condition for every summand against threshold `d`.
pub fn check_lds_conditions(decomp: &ProductDecomposition, d: u64, delta: u32) -> LdsReport {
    let dd = BigUint::from(d);
    let mut verdicts = Vec::with_capacity(decomp.s());
    for i in 0..decomp.s() {
        let degs = decomp.degrees(i);
        let linear = degs.iter().filter(|&&x| x == 1).count();
        // count >= d^{2^{1−Δ}}  ⇔  count^{2^{Δ−1}} >= d
        if delta >= 1 && pow_big(linear as u64, 1 << (delta - 1)) >= dd {
            verdicts.push(LdsVerdict::Linear { count: linear });
            continue;
        }
        let mut found = None;
        for dl in 2..=delta {
            let e = 1u32 << (dl - 1);
            // deg ∈ [b/2, b] with b = d^{2^{1−δ}}:  deg^e <= d  and  (2·deg)^e >= d
            let count = degs
                .iter()
                .filter(|&&x| pow_big(x, e) <= dd && pow_big(2 * x, e) >= dd)
                .count();
            if pow_big(count as u64 + 1, e) >= dd {
                found = Some(LdsVerdict::Balanced { delta: dl, count });
                break;
            }
        }
        verdicts.push(found.unwrap_or(LdsVerdict::Fails));
    }
    LdsReport {
        holds: verdicts.iter().all(|v| *v != LdsVerdict::Fails),
        verdicts,
    }
}
