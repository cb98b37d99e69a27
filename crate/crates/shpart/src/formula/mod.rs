//! Arithmetic formulas, parse trees, canonical trees, UPT detection, and the
//! degree-sequence and `k`-selection procedures for UPT formulas.

mod degseq;
mod json;
mod tree;
mod upt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Field, Homogeneity, Monomial, Polynomial, Scalar};
use crate::error::{Error, Result};

pub use degseq::{deg_seq, spine_cut, upt_k, DegreeSequence, UptKTrace};
pub use json::{formula_from_json, formula_to_json};
pub use tree::{all_trees, caterpillar, isomorphic_bruteforce, BinaryTree};
pub use upt::{
    gate_canonical_trees, is_upt, parse_tree_count, parse_trees, ParseTrees,
    DEFAULT_PARSE_TREE_LIMIT,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub child: usize,
    pub coeff: BigRational,
}

impl Edge {
    pub fn unit(child: usize) -> Edge {
        Edge {
            child,
            coeff: BigRational::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Input(u32),
    Add(Vec<Edge>),
    Mul(Vec<Edge>),
}

impl Gate {
    pub fn edges(&self) -> &[Edge] {
        match self {
            Gate::Input(_) => &[],
            Gate::Add(e) | Gate::Mul(e) => e,
        }
    }

    pub fn is_add(&self) -> bool {
        matches!(self, Gate::Add(_))
    }

    pub fn is_mul(&self) -> bool {
        matches!(self, Gate::Mul(_))
    }
}

/// A formula: gates forming a rooted tree. Edge scalars multiply the child's value;
/// a `Mul` gate computes the product of its scaled children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    nvars: u32,
    nodes: Vec<Gate>,
    root: usize,
}

impl Formula {
    pub fn new(nvars: u32, nodes: Vec<Gate>, root: usize) -> Result<Formula> {
        let bad = |m: String| Err(Error::InvalidFormula(m));
        if root >= nodes.len() {
            return bad(format!("root {root} out of range"));
        }
        let mut parents = vec![0usize; nodes.len()];
        for (i, g) in nodes.iter().enumerate() {
            match g {
                Gate::Input(v) => {
                    if *v == 0 || *v > nvars {
                        return bad(format!("gate {i} reads x{v} outside 1..={nvars}"));
                    }
                }
                Gate::Add(es) | Gate::Mul(es) => {
                    if es.is_empty() {
                        return bad(format!("gate {i} has no children"));
                    }
                    for e in es {
                        if e.child >= nodes.len() {
                            return bad(format!("gate {i} points to missing gate {}", e.child));
                        }
                        if e.coeff.is_zero() {
                            return bad(format!("zero edge scalar at gate {i}"));
                        }
                        parents[e.child] += 1;
                    }
                }
            }
        }
        if parents[root] != 0 {
            return bad("root has a parent".into());
        }
        for (i, &c) in parents.iter().enumerate() {
            if i != root && c != 1 {
                return bad(format!("gate {i} has {c} parents"));
            }
        }
        let f = Formula { nvars, nodes, root };
        if f.postorder().len() != f.nodes.len() {
            return bad("gates unreachable from the root".into());
        }
        Ok(f)
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn gates(&self) -> &[Gate] {
        &self.nodes
    }

    pub fn gate(&self, i: usize) -> &Gate {
        &self.nodes[i]
    }

    /// Number of gates, inputs included.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Gates reachable from the root, children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((g, expanded)) = stack.pop() {
            if expanded {
                out.push(g);
                continue;
            }
            if seen[g] {
                continue;
            }
            seen[g] = true;
            stack.push((g, true));
            for e in self.nodes[g].edges().iter().rev() {
                stack.push((e.child, false));
            }
        }
        out
    }

    fn eval_inner(&self, replace: Option<(usize, &Polynomial)>, nvars: u32) -> Vec<Polynomial> {
        let field = Field::Rational;
        let mut vals: Vec<Option<Polynomial>> = vec![None; self.nodes.len()];
        for g in self.postorder() {
            if let Some((h, p)) = replace {
                if h == g {
                    vals[g] = Some(p.clone());
                    continue;
                }
            }
            let scaled = |e: &Edge, vals: &Vec<Option<Polynomial>>| {
                let v = vals[e.child].as_ref().expect("child evaluated");
                if e.coeff.is_one() {
                    v.clone()
                } else {
                    v.scale(&Scalar::Rational(e.coeff.clone()))
                }
            };
            let v = match &self.nodes[g] {
                Gate::Input(i) => Polynomial::var(*i, nvars, field),
                Gate::Add(es) => {
                    let mut acc = Polynomial::zero(nvars, field);
                    for e in es {
                        acc = &acc + &scaled(e, &vals);
                    }
                    acc
                }
                Gate::Mul(es) => {
                    let mut acc = Polynomial::one(nvars, field);
                    for e in es {
                        acc = &acc * &scaled(e, &vals);
                    }
                    acc
                }
            };
            vals[g] = Some(v);
        }
        vals.into_iter()
            .map(|v| v.expect("all gates reachable"))
            .collect()
    }

    /// Polynomial computed at every gate.
    pub fn eval_all(&self) -> Vec<Polynomial> {
        self.eval_inner(None, self.nvars)
    }

    pub fn eval(&self) -> Polynomial {
        self.eval_all().swap_remove(self.root)
    }

    /// Degree assigned by the syntax alone (inputs 1, products add, sums must agree).
    pub fn formal_degrees(&self) -> Vec<Option<u32>> {
        let mut deg: Vec<Option<u32>> = vec![None; self.nodes.len()];
        for g in self.postorder() {
            deg[g] = match &self.nodes[g] {
                Gate::Input(_) => Some(1),
                Gate::Mul(es) => es.iter().map(|e| deg[e.child]).sum(),
                Gate::Add(es) => {
                    let first = deg[es[0].child];
                    if es.iter().all(|e| deg[e.child] == first) {
                        first
                    } else {
                        None
                    }
                }
            };
        }
        deg
    }

    /// Whether every gate computes a homogeneous polynomial. Syntactic agreement of
    /// degrees suffices; otherwise each gate is evaluated.
    pub fn check_homogeneous(&self) -> bool {
        if self.formal_degrees().iter().all(Option::is_some) {
            return true;
        }
        self.eval_all()
            .iter()
            .all(|p| p.homogeneity().is_homogeneous())
    }

    /// Degree of each gate's polynomial (`None` for zero or inhomogeneous).
    pub fn semantic_degrees(&self) -> Vec<Option<u32>> {
        self.eval_all()
            .iter()
            .map(|p| match p.homogeneity() {
                Homogeneity::Degree(d) => Some(d),
                _ => None,
            })
            .collect()
    }

    /// Maximum number of multiplication gates on a root-to-leaf path.
    pub fn product_depth(&self) -> u32 {
        self.product_depths()[self.root]
    }

    pub fn product_depths(&self) -> Vec<u32> {
        let mut pd = vec![0u32; self.nodes.len()];
        for g in self.postorder() {
            pd[g] = match &self.nodes[g] {
                Gate::Input(_) => 0,
                Gate::Add(es) => es.iter().map(|e| pd[e.child]).max().unwrap_or(0),
                Gate::Mul(es) => 1 + es.iter().map(|e| pd[e.child]).max().unwrap_or(0),
            };
        }
        pd
    }

    pub fn is_binarized(&self) -> bool {
        self.nodes
            .iter()
            .all(|g| !matches!(g, Gate::Mul(es) if es.len() != 2))
    }

    /// Rewrites `Mul` gates of fan-in above two into left-to-right binary chains and
    /// unary `Mul` gates into unary `Add` gates.
    pub fn binarize(&self) -> Formula {
        let mut b = FormulaBuilder::new();
        let root = self.copy_into(self.root, &mut b, true);
        b.build(root, self.nvars)
            .expect("binarization preserves validity")
    }

    fn copy_into(&self, g: usize, b: &mut FormulaBuilder, binarize: bool) -> usize {
        match &self.nodes[g] {
            Gate::Input(v) => b.input(*v),
            Gate::Add(es) => {
                let kids = es
                    .iter()
                    .map(|e| Edge {
                        child: self.copy_into(e.child, b, binarize),
                        coeff: e.coeff.clone(),
                    })
                    .collect();
                b.push(Gate::Add(kids))
            }
            Gate::Mul(es) => {
                let kids: Vec<Edge> = es
                    .iter()
                    .map(|e| Edge {
                        child: self.copy_into(e.child, b, binarize),
                        coeff: e.coeff.clone(),
                    })
                    .collect();
                if !binarize || kids.len() == 2 {
                    return b.push(Gate::Mul(kids));
                }
                if kids.len() == 1 {
                    return b.push(Gate::Add(kids));
                }
                let mut it = kids.into_iter();
                let first = it.next().unwrap();
                let second = it.next().unwrap();
                let mut acc = b.push(Gate::Mul(vec![first, second]));
                for e in it {
                    acc = b.push(Gate::Mul(vec![Edge::unit(acc), e]));
                }
                acc
            }
        }
    }

    /// The sub-formula rooted at gate `g`.
    pub fn subformula(&self, g: usize) -> Result<Formula> {
        if g >= self.nodes.len() {
            return Err(Error::InvalidFormula(format!("gate {g} not found")));
        }
        let mut b = FormulaBuilder::new();
        let root = self.copy_into(g, &mut b, false);
        b.build(root, self.nvars)
    }

    /// Treats flagged gates as the constant 0 and simplifies (`g×0 = 0`, `g+0 = g`).
    /// Returns `None` when the whole formula collapses to 0.
    pub fn prune_zero(&self, zero: &dyn Fn(usize, &Gate) -> bool) -> Option<Formula> {
        let mut dead = vec![false; self.nodes.len()];
        for g in self.postorder() {
            let gate = &self.nodes[g];
            dead[g] = zero(g, gate)
                || match gate {
                    Gate::Input(_) => false,
                    Gate::Mul(es) => es.iter().any(|e| dead[e.child]),
                    Gate::Add(es) => es.iter().all(|e| dead[e.child]),
                };
        }
        if dead[self.root] {
            return None;
        }
        let mut b = FormulaBuilder::new();
        let root = self.prune_into(self.root, &dead, &mut b);
        Some(
            b.build(root, self.nvars)
                .expect("pruning preserves validity"),
        )
    }

    fn prune_into(&self, g: usize, dead: &[bool], b: &mut FormulaBuilder) -> usize {
        match &self.nodes[g] {
            Gate::Input(v) => b.input(*v),
            Gate::Mul(es) | Gate::Add(es) => {
                let kids: Vec<Edge> = es
                    .iter()
                    .filter(|e| !dead[e.child])
                    .map(|e| Edge {
                        child: self.prune_into(e.child, dead, b),
                        coeff: e.coeff.clone(),
                    })
                    .collect();
                b.push(if self.nodes[g].is_mul() {
                    Gate::Mul(kids)
                } else {
                    Gate::Add(kids)
                })
            }
        }
    }

    /// `f` with gate `g` replaced by 0, simplified.
    pub fn replace_with_zero(&self, g: usize) -> Option<Formula> {
        self.prune_zero(&|h, _| h == g)
    }

    /// `f` with the given input variables set to 0, simplified.
    pub fn set_vars_zero(&self, vars: &[u32]) -> Option<Formula> {
        self.prune_zero(&|_, gate| matches!(gate, Gate::Input(v) if vars.contains(v)))
    }

    /// `(A, B, C_g)` with `f = A·C_g + B`, from evaluating `f` with gate `g` replaced
    /// by a fresh variable.
    pub fn split_at_gate(&self, g: usize) -> Result<(Polynomial, Polynomial, Formula)> {
        if g >= self.nodes.len() {
            return Err(Error::InvalidFormula(format!("gate {g} not found")));
        }
        let y = self.nvars + 1;
        let yv = Polynomial::monomial(Monomial::var(y), Scalar::one(Field::Rational), y);
        let vals = self.eval_inner(Some((g, &yv)), y);
        let (a, b) = vals[self.root].split_linear(y)?;
        Ok((
            a.with_nvars(self.nvars)?,
            b.with_nvars(self.nvars)?,
            self.subformula(g)?,
        ))
    }
}

/// Incremental construction of formulas; gates are appended and referenced by index.
#[derive(Clone, Debug, Default)]
pub struct FormulaBuilder {
    nodes: Vec<Gate>,
}

impl FormulaBuilder {
    pub fn new() -> FormulaBuilder {
        FormulaBuilder::default()
    }

    pub fn push(&mut self, g: Gate) -> usize {
        self.nodes.push(g);
        self.nodes.len() - 1
    }

    pub fn input(&mut self, v: u32) -> usize {
        self.push(Gate::Input(v))
    }

    pub fn add(&mut self, kids: &[usize]) -> usize {
        self.push(Gate::Add(kids.iter().map(|&c| Edge::unit(c)).collect()))
    }

    pub fn add_scaled(&mut self, kids: Vec<(usize, BigRational)>) -> usize {
        self.push(Gate::Add(
            kids.into_iter()
                .map(|(child, coeff)| Edge { child, coeff })
                .collect(),
        ))
    }

    pub fn mul(&mut self, kids: &[usize]) -> usize {
        self.push(Gate::Mul(kids.iter().map(|&c| Edge::unit(c)).collect()))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn build(self, root: usize, nvars: u32) -> Result<Formula> {
        Formula::new(nvars, self.nodes, root)
    }
}
