//! Seeded generators for polynomials, maps, trees and formulas.
//!
//! Every consumer derives its own sub-seed with [`derive_seed`] so that results do
//! not depend on thread scheduling or on how many other instances were drawn.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{enumerate_monomials, Field, LinearMap, Monomial, Polynomial, Scalar};
use crate::formula::{BinaryTree, Formula, FormulaBuilder};

/// Mixes a base seed, a label and an index into an independent sub-seed.
pub fn derive_seed(seed: u64, label: &str, idx: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix(splitmix(seed ^ h).wrapping_add(idx))
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, label: &str, idx: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label, idx))
}

/// `L(x_i) = Σ_j c_ij z_j` with `c_ij` uniform in `[-3, 3]`.
pub fn random_linear_map<R: Rng>(rng: &mut R, n: u32, n0: u32, field: Field) -> LinearMap {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n0).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    LinearMap::from_int_matrix(n0, &rows, field).expect("integer rows give linear forms")
}

fn nonzero_coeff<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let c = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

/// A homogeneous degree-`d` polynomial with up to `terms` monomials and nonzero
/// coefficients in `[-5, 5]`.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    n: u32,
    d: u32,
    terms: usize,
    field: Field,
) -> Polynomial {
    let all = enumerate_monomials(n, d);
    let picked: Vec<&Monomial> = all
        .choose_multiple(rng, terms.min(all.len()).max(1))
        .collect();
    let mut p = Polynomial::zero(n, field);
    for m in picked {
        let c = Scalar::from_int(nonzero_coeff(rng, 5), field);
        p = &p + &Polynomial::monomial(m.clone(), c, n);
    }
    p
}

/// A uniformly random ordered split of `n >= 2` leaves.
pub fn random_tree<R: Rng>(rng: &mut R, leaves: u32) -> BinaryTree {
    if leaves <= 1 {
        return BinaryTree::Leaf;
    }
    let l = rng.gen_range(1..leaves);
    BinaryTree::node(random_tree(rng, l), random_tree(rng, leaves - l))
}

fn edge_scalar<R: Rng>(rng: &mut R) -> BigRational {
    let num = nonzero_coeff(rng, 3);
    let den = rng.gen_range(1..=2);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_input<R: Rng>(rng: &mut R, b: &mut FormulaBuilder, n: u32) -> usize {
    b.input(rng.gen_range(1..=n))
}

/// A formula in which every parse tree is isomorphic to `shape`. Addition gates
/// combine copies of the shape with the children of each product drawn in either
/// order, so parse trees differ as ordered trees but not up to isomorphism.
pub fn random_upt_formula<R: Rng>(
    rng: &mut R,
    n: u32,
    shape: &BinaryTree,
    max_fanin: usize,
) -> Formula {
    let mut b = FormulaBuilder::new();
    let root = upt_gate(rng, &mut b, n, shape, max_fanin.max(1), 0);
    b.build(root, n).expect("generated formula is a tree")
}

fn upt_gate<R: Rng>(
    rng: &mut R,
    b: &mut FormulaBuilder,
    n: u32,
    shape: &BinaryTree,
    fan: usize,
    depth: u32,
) -> usize {
    let fanin = if depth < 3 { rng.gen_range(1..=fan) } else { 1 };
    let mut kids = Vec::with_capacity(fanin);
    for _ in 0..fanin {
        let g = match shape.children() {
            None => random_input(rng, b, n),
            Some((l, r)) => {
                let lg = upt_gate(rng, b, n, l, fan, depth + 1);
                let rg = upt_gate(rng, b, n, r, fan, depth + 1);
                if rng.gen_bool(0.5) {
                    b.mul(&[lg, rg])
                } else {
                    b.mul(&[rg, lg])
                }
            }
        };
        kids.push((g, edge_scalar(rng)));
    }
    if kids.len() == 1 && rng.gen_bool(0.5) {
        kids[0].0
    } else {
        b.add_scaled(kids)
    }
}

/// A syntactically homogeneous formula of degree `d` with binary products whose
/// addition gates may mix different product shapes.
pub fn random_homogeneous_formula<R: Rng>(
    rng: &mut R,
    n: u32,
    d: u32,
    max_fanin: usize,
) -> Formula {
    let mut b = FormulaBuilder::new();
    let root = mixed_gate(rng, &mut b, n, d, max_fanin.max(1), 0);
    b.build(root, n).expect("generated formula is a tree")
}

fn mixed_gate<R: Rng>(
    rng: &mut R,
    b: &mut FormulaBuilder,
    n: u32,
    d: u32,
    fan: usize,
    depth: u32,
) -> usize {
    let fanin = if depth < 2 { rng.gen_range(1..=fan) } else { 1 };
    let mut kids = Vec::with_capacity(fanin);
    for _ in 0..fanin {
        let g = if d == 1 {
            random_input(rng, b, n)
        } else {
            let l = rng.gen_range(1..d);
            let lg = mixed_gate(rng, b, n, l, fan, depth + 1);
            let rg = mixed_gate(rng, b, n, d - l, fan, depth + 1);
            b.mul(&[lg, rg])
        };
        kids.push((g, edge_scalar(rng)));
    }
    if kids.len() == 1 && rng.gen_bool(0.5) {
        kids[0].0
    } else {
        b.add_scaled(kids)
    }
}

/// A homogeneous alternating formula of product depth exactly `depth` (for
/// `d >= 2^(depth-1)`) and degree `d`, with a sum at the root.
pub fn random_low_depth_formula<R: Rng>(
    rng: &mut R,
    n: u32,
    d: u32,
    depth: u32,
    max_fanin: usize,
) -> Formula {
    let mut b = FormulaBuilder::new();
    let root = alt_sum(rng, &mut b, n, d, depth.max(1), max_fanin.max(1));
    b.build(root, n).expect("generated formula is a tree")
}

fn alt_sum<R: Rng>(
    rng: &mut R,
    b: &mut FormulaBuilder,
    n: u32,
    d: u32,
    depth: u32,
    fan: usize,
) -> usize {
    let fanin = rng.gen_range(1..=fan);
    let kids: Vec<(usize, BigRational)> = (0..fanin)
        .map(|_| (alt_prod(rng, b, n, d, depth, fan), edge_scalar(rng)))
        .collect();
    b.add_scaled(kids)
}

fn alt_prod<R: Rng>(
    rng: &mut R,
    b: &mut FormulaBuilder,
    n: u32,
    d: u32,
    depth: u32,
    fan: usize,
) -> usize {
    if depth == 1 || d == 1 {
        let xs: Vec<usize> = (0..d).map(|_| random_input(rng, b, n)).collect();
        return b.mul(&xs);
    }
    // split d into at least two parts, one of which is large enough to keep the depth
    let extra = rng.gen_range(0..=1u32).min(d - 2);
    let parts = random_composition(rng, d, 2 + extra);
    let kids: Vec<usize> = parts
        .into_iter()
        .map(|p| alt_sum(rng, b, n, p, depth - 1, fan))
        .collect();
    b.mul(&kids)
}

/// A uniformly random split of `d` into `parts` positive summands.
pub fn random_composition<R: Rng>(rng: &mut R, d: u32, parts: u32) -> Vec<u32> {
    let parts = parts.clamp(1, d);
    let mut cuts: Vec<u32> = (1..d).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<u32> = cuts.into_iter().take(parts as usize - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts as usize);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(d - prev);
    out
}
