use num_rational::BigRational;
use num_traits::Zero;

use super::bounds::feasible_region;
use super::rank::RowSpace;
use crate::algebra::{enumerate_monomials, DerivativeMultiset, Monomial, Polynomial};
use crate::error::{Error, Result};

/// Outcome of the derivative-space containment check.
#[derive(Clone, Debug)]
pub struct Containment {
    pub holds: bool,
    /// A derivative multiset whose partial of the product escapes the right-hand side.
    pub witness: Option<Monomial>,
    pub rhs_rank: usize,
    pub lhs_rank: usize,
}

/// Checks `⟨∂^k(Q_1⋯Q_t)⟩ ⊆ Σ_{S,k0,l0} ⟨x^{l0}·∂^{k0}(Π_{i∈S} Q_i)⟩` by rank.
pub fn derivative_space_containment(qs: &[Polynomial], k: u64) -> Result<Containment> {
    containment_with_slack(qs, k, &BigRational::zero())
}

/// As [`derivative_space_containment`], with the residue term increased by `slack`.
pub fn containment_with_slack(
    qs: &[Polynomial],
    k: u64,
    slack: &BigRational,
) -> Result<Containment> {
    let Some(first) = qs.first() else {
        return Err(Error::Precondition("need at least one factor".into()));
    };
    let n = first.nvars();
    let field = first.field();
    let mut degrees = Vec::with_capacity(qs.len());
    for q in qs {
        match q.is_homogeneous() {
            (true, Some(dq)) if dq >= 1 => degrees.push(dq as u64),
            _ => {
                return Err(Error::Precondition(
                    "factors must be non-constant homogeneous".into(),
                ))
            }
        }
    }
    let d: u64 = degrees.iter().sum();
    let region = feasible_region(&degrees, k, slack)?;
    let t = qs.len();

    // every generator is homogeneous, so only those of degree d − k can contribute
    let mut rhs = RowSpace::new(field);
    for mask in 0u32..(1 << t) {
        let members: Vec<usize> = (0..t).filter(|i| mask >> i & 1 == 1).collect();
        let ds: u64 = members.iter().map(|&i| degrees[i]).sum();
        let qs_prod = Polynomial::product(n, field, members.iter().map(|&i| &qs[i]));
        for &(k0, l0) in &region {
            if l0 + ds != d - k + k0 {
                continue;
            }
            let mut ders = RowSpace::new(field);
            let mut basis = Vec::new();
            for beta in enumerate_monomials(n, k0 as u32) {
                let q = qs_prod.derivative(&DerivativeMultiset(beta))?;
                if ders.insert(&q)? {
                    basis.push(q);
                }
            }
            for m in enumerate_monomials(n, l0 as u32) {
                for q in &basis {
                    rhs.insert(&q.mul_monomial(&m))?;
                }
            }
        }
    }

    let product = Polynomial::product(n, field, qs.iter());
    let mut lhs = RowSpace::new(field);
    let mut witness = None;
    for alpha in enumerate_monomials(n, k as u32) {
        let q = product.derivative(&DerivativeMultiset(alpha.clone()))?;
        lhs.insert(&q)?;
        if witness.is_none() && !rhs.contains(&q)? {
            witness = Some(alpha);
        }
    }
    Ok(Containment {
        holds: witness.is_none(),
        witness,
        rhs_rank: rhs.rank(),
        lhs_rank: lhs.rank(),
    })
}
