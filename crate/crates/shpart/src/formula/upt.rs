use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::tree::{canonical_join, BinaryTree};
use super::{Formula, Gate};
use crate::error::{Error, Result};

pub const DEFAULT_PARSE_TREE_LIMIT: usize = 10_000;

/// Parse trees of a formula; `truncated` is set when more than `limit` exist.
#[derive(Clone, Debug)]
pub struct ParseTrees {
    pub trees: Vec<BinaryTree>,
    pub truncated: bool,
}

fn require_binary(f: &Formula) -> Result<()> {
    if f.is_binarized() {
        Ok(())
    } else {
        Err(Error::Precondition(
            "multiplication gates must have fan-in 2; binarize first".into(),
        ))
    }
}

/// Enumerates parse trees by choosing one child at every addition gate.
pub fn parse_trees(f: &Formula, limit: usize) -> Result<ParseTrees> {
    require_binary(f)?;
    let cap = limit.saturating_add(1);
    let mut sets: Vec<Vec<BinaryTree>> = vec![Vec::new(); f.size()];
    for g in f.postorder() {
        let set = match f.gate(g) {
            Gate::Input(_) => vec![BinaryTree::Leaf],
            Gate::Add(es) => {
                let mut out = Vec::new();
                for e in es {
                    for t in &sets[e.child] {
                        if out.len() == cap {
                            break;
                        }
                        out.push(t.clone());
                    }
                }
                out
            }
            Gate::Mul(es) => {
                let (l, r) = (&sets[es[0].child], &sets[es[1].child]);
                let mut out = Vec::new();
                'outer: for a in l {
                    for b in r {
                        if out.len() == cap {
                            break 'outer;
                        }
                        out.push(BinaryTree::node(a.clone(), b.clone()));
                    }
                }
                out
            }
        };
        sets[g] = set;
    }
    let mut trees = std::mem::take(&mut sets[f.root()]);
    let truncated = trees.len() > limit;
    trees.truncate(limit);
    Ok(ParseTrees { trees, truncated })
}

/// Number of parse trees, without enumerating them.
pub fn parse_tree_count(f: &Formula) -> BigUint {
    let mut c: Vec<BigUint> = vec![BigUint::zero(); f.size()];
    for g in f.postorder() {
        c[g] = match f.gate(g) {
            Gate::Input(_) => BigUint::one(),
            Gate::Add(es) => es.iter().map(|e| &c[e.child]).sum(),
            Gate::Mul(es) => es.iter().map(|e| &c[e.child]).product(),
        };
    }
    c.swap_remove(f.root())
}

/// Canonical parse tree of every gate's sub-formula, or `None` where that
/// sub-formula is not UPT.
pub fn gate_canonical_trees(f: &Formula) -> Result<Vec<Option<BinaryTree>>> {
    require_binary(f)?;
    let mut out: Vec<Option<BinaryTree>> = vec![None; f.size()];
    for g in f.postorder() {
        out[g] = match f.gate(g) {
            Gate::Input(_) => Some(BinaryTree::Leaf),
            Gate::Mul(es) => match (&out[es[0].child], &out[es[1].child]) {
                (Some(l), Some(r)) => Some(canonical_join(l.clone(), r.clone())),
                _ => None,
            },
            Gate::Add(es) => {
                let first = &out[es[0].child];
                if first.is_some() && es.iter().all(|e| &out[e.child] == first) {
                    first.clone()
                } else {
                    None
                }
            }
        };
    }
    Ok(out)
}

/// The canonical parse tree when all parse trees of `f` are isomorphic.
pub fn is_upt(f: &Formula) -> Result<Option<BinaryTree>> {
    Ok(gate_canonical_trees(f)?.swap_remove(f.root()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::FormulaBuilder;

    /// (x1·x2)·x3 + x1·(x2·x3): two parse trees, mirror images of each other.
    fn mirrored() -> Formula {
        let mut b = FormulaBuilder::new();
        let (a1, a2, a3) = (b.input(1), b.input(2), b.input(3));
        let p = b.mul(&[a1, a2]);
        let left = b.mul(&[p, a3]);
        let (c1, c2, c3) = (b.input(1), b.input(2), b.input(3));
        let q = b.mul(&[c2, c3]);
        let right = b.mul(&[c1, q]);
        let r = b.add(&[left, right]);
        b.build(r, 3).unwrap()
    }

    #[test]
    fn mirrored_trees_are_upt() {
        let f = mirrored();
        let pt = parse_trees(&f, 10).unwrap();
        assert_eq!(pt.trees.len(), 2);
        assert!(!pt.truncated);
        assert_ne!(pt.trees[0], pt.trees[1]);
        assert_eq!(pt.trees[0].canonical(), pt.trees[1].canonical());
        assert_eq!(is_upt(&f).unwrap().unwrap().to_string(), "(L,(L,L))");
    }

    #[test]
    fn different_shapes_not_upt() {
        // x1·x2·x3·x4 as a caterpillar plus (x1·x2)·(x3·x4)
        let mut b = FormulaBuilder::new();
        let xs: Vec<usize> = (1..=4).map(|i| b.input(i)).collect();
        let m1 = b.mul(&[xs[2], xs[3]]);
        let m2 = b.mul(&[xs[1], m1]);
        let cat = b.mul(&[xs[0], m2]);
        let ys: Vec<usize> = (1..=4).map(|i| b.input(i)).collect();
        let p = b.mul(&[ys[0], ys[1]]);
        let q = b.mul(&[ys[2], ys[3]]);
        let bal = b.mul(&[p, q]);
        let r = b.add(&[cat, bal]);
        let f = b.build(r, 4).unwrap();
        assert!(is_upt(&f).unwrap().is_none());
        assert_eq!(parse_tree_count(&f), BigUint::from(2u32));
        let pt = parse_trees(&f, 1).unwrap();
        assert!(pt.truncated);
        assert_eq!(pt.trees.len(), 1);
    }

    #[test]
    fn unbinarized_rejected() {
        let mut b = FormulaBuilder::new();
        let xs: Vec<usize> = (1..=3).map(|i| b.input(i)).collect();
        let m = b.mul(&xs);
        let f = b.build(m, 3).unwrap();
        assert!(is_upt(&f).is_err());
        assert!(is_upt(&f.binarize()).unwrap().is_some());
    }
}
