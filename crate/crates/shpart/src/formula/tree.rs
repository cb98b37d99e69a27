use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A full binary tree with leaf counts cached at internal nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    Leaf,
    Node {
        left: Box<BinaryTree>,
        right: Box<BinaryTree>,
        leaves: u32,
    },
}

impl BinaryTree {
    pub fn leaf() -> BinaryTree {
        BinaryTree::Leaf
    }

    pub fn node(left: BinaryTree, right: BinaryTree) -> BinaryTree {
        let leaves = left.leaves() + right.leaves();
        BinaryTree::Node {
            left: Box::new(left),
            right: Box::new(right),
            leaves,
        }
    }

    pub fn leaves(&self) -> u32 {
        match self {
            BinaryTree::Leaf => 1,
            BinaryTree::Node { leaves, .. } => *leaves,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinaryTree::Leaf)
    }

    pub fn children(&self) -> Option<(&BinaryTree, &BinaryTree)> {
        match self {
            BinaryTree::Leaf => None,
            BinaryTree::Node { left, right, .. } => Some((left, right)),
        }
    }

    pub fn right(&self) -> Option<&BinaryTree> {
        self.children().map(|(_, r)| r)
    }

    /// Serialization used as the injective encoding: `L` or `(left,right)`.
    pub fn encoding(&self) -> String {
        let mut s = String::new();
        self.write_encoding(&mut s);
        s
    }

    fn write_encoding(&self, out: &mut String) {
        match self {
            BinaryTree::Leaf => out.push('L'),
            BinaryTree::Node { left, right, .. } => {
                out.push('(');
                left.write_encoding(out);
                out.push(',');
                right.write_encoding(out);
                out.push(')');
            }
        }
    }

    pub fn parse(s: &str) -> Result<BinaryTree> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let t = parse_at(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Ok(t)
    }

    /// Every internal node has at most as many leaves on the left as on the right.
    pub fn is_right_heavy(&self) -> bool {
        match self {
            BinaryTree::Leaf => true,
            BinaryTree::Node { left, right, .. } => {
                left.leaves() <= right.leaves() && left.is_right_heavy() && right.is_right_heavy()
            }
        }
    }

    /// Canonical form: children are swapped when the left has more leaves, or the
    /// same number of leaves and a larger encoding.
    pub fn canonical(&self) -> BinaryTree {
        match self {
            BinaryTree::Leaf => BinaryTree::Leaf,
            BinaryTree::Node { left, right, .. } => {
                canonical_join(left.canonical(), right.canonical())
            }
        }
    }

    /// Nodes along the rightmost path, starting at the root.
    pub fn right_spine(&self) -> Vec<&BinaryTree> {
        let mut out = vec![self];
        let mut cur = self;
        while let Some(r) = cur.right() {
            out.push(r);
            cur = r;
        }
        out
    }

    pub fn node_count(&self) -> usize {
        2 * self.leaves() as usize - 1
    }
}

/// Joins two canonical trees under a new root, applying the swap rule.
pub(crate) fn canonical_join(l: BinaryTree, r: BinaryTree) -> BinaryTree {
    let swap = match l.leaves().cmp(&r.leaves()) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => l.encoding() > r.encoding(),
    };
    if swap {
        BinaryTree::node(r, l)
    } else {
        BinaryTree::node(l, r)
    }
}

fn parse_at(b: &[u8], pos: &mut usize) -> Result<BinaryTree> {
    let err = |p: usize| Error::Parse(format!("malformed tree at byte {p}"));
    match b.get(*pos) {
        Some(b'L') => {
            *pos += 1;
            Ok(BinaryTree::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let l = parse_at(b, pos)?;
            if b.get(*pos) != Some(&b',') {
                return Err(err(*pos));
            }
            *pos += 1;
            let r = parse_at(b, pos)?;
            if b.get(*pos) != Some(&b')') {
                return Err(err(*pos));
            }
            *pos += 1;
            Ok(BinaryTree::node(l, r))
        }
        _ => Err(err(*pos)),
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl FromStr for BinaryTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<BinaryTree> {
        BinaryTree::parse(s)
    }
}

/// Isomorphism by direct search over child matchings; independent of [`BinaryTree::canonical`].
pub fn isomorphic_bruteforce(a: &BinaryTree, b: &BinaryTree) -> bool {
    if a.leaves() != b.leaves() {
        return false;
    }
    match (a.children(), b.children()) {
        (None, None) => true,
        (Some((al, ar)), Some((bl, br))) => {
            (isomorphic_bruteforce(al, bl) && isomorphic_bruteforce(ar, br))
                || (isomorphic_bruteforce(al, br) && isomorphic_bruteforce(ar, bl))
        }
        _ => false,
    }
}

/// All ordered full binary trees with `n` leaves.
pub fn all_trees(n: u32) -> Vec<BinaryTree> {
    let mut table: Vec<Vec<BinaryTree>> = vec![Vec::new(), vec![BinaryTree::Leaf]];
    for m in 2..=n as usize {
        let mut cur = Vec::new();
        for i in 1..m {
            for l in &table[i] {
                for r in &table[m - i] {
                    cur.push(BinaryTree::node(l.clone(), r.clone()));
                }
            }
        }
        table.push(cur);
    }
    if n == 0 {
        return Vec::new();
    }
    table.swap_remove(n as usize)
}

/// Right caterpillar: every internal node has a leaf as its left child.
pub fn caterpillar(n: u32) -> BinaryTree {
    assert!(n >= 1, "a tree has at least one leaf");
    let mut t = BinaryTree::Leaf;
    for _ in 1..n {
        t = BinaryTree::node(BinaryTree::Leaf, t);
    }
    t
}
