use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use super::ProductDecomposition;
use crate::algebra::{Field, Homogeneity, Polynomial};
use crate::error::{Error, Result};
use crate::formula::{Formula, Gate};

/// Alternating normal form: linear forms at the bottom, sums of products above.
/// Every node carries its (nonzero, homogeneous) polynomial.
#[derive(Clone, Debug)]
enum Node {
    Lin(Polynomial),
    Sum {
        terms: Vec<Term>,
        poly: Polynomial,
        degree: u32,
    },
}

#[derive(Clone, Debug)]
struct Term {
    coeff: BigRational,
    factors: Vec<Node>,
}

impl Node {
    fn poly(&self) -> &Polynomial {
        match self {
            Node::Lin(p) | Node::Sum { poly: p, .. } => p,
        }
    }

    fn degree(&self) -> u32 {
        match self {
            Node::Lin(_) => 1,
            Node::Sum { degree, .. } => *degree,
        }
    }

    fn product_depth(&self) -> u32 {
        match self {
            Node::Lin(_) => 0,
            Node::Sum { terms, .. } => {
                1 + terms
                    .iter()
                    .flat_map(|t| &t.factors)
                    .map(Node::product_depth)
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Gates of the alternating formula: inputs plus one `Add` per linear form with
    /// several variables, and per sum one `Add` (when it has several terms) and one
    /// `Mul` per term.
    fn size(&self) -> usize {
        match self {
            Node::Lin(p) => {
                let k = p.num_terms();
                if k == 1 {
                    1
                } else {
                    k + 1
                }
            }
            Node::Sum { terms, .. } => {
                let inner: usize = terms
                    .iter()
                    .map(|t| 1 + t.factors.iter().map(Node::size).sum::<usize>())
                    .sum();
                inner + usize::from(terms.len() > 1)
            }
        }
    }

    fn scaled(self, c: &BigRational) -> Node {
        if c.is_one() {
            return self;
        }
        match self {
            Node::Lin(p) => Node::Lin(p.scale_rational(c).expect("rational field")),
            Node::Sum {
                terms,
                poly,
                degree,
            } => Node::Sum {
                terms: terms
                    .into_iter()
                    .map(|t| Term {
                        coeff: t.coeff * c,
                        factors: t.factors,
                    })
                    .collect(),
                poly: poly.scale_rational(c).expect("rational field"),
                degree,
            },
        }
    }
}

fn term_poly(nvars: u32, t: &Term) -> Polynomial {
    Polynomial::product(nvars, Field::Rational, t.factors.iter().map(Node::poly))
        .scale_rational(&t.coeff)
        .expect("rational field")
}

struct Normalizer<'a> {
    f: &'a Formula,
}

impl Normalizer<'_> {
    /// `None` when the gate computes 0.
    fn node(&self, g: usize) -> Result<Option<Node>> {
        let nvars = self.f.nvars();
        match self.f.gate(g) {
            Gate::Input(v) => Ok(Some(Node::Lin(Polynomial::var(*v, nvars, Field::Rational)))),
            Gate::Mul(es) => {
                let mut coeff = BigRational::one();
                let mut factors = Vec::new();
                for e in es {
                    let Some(child) = self.node(e.child)? else {
                        return Ok(None);
                    };
                    coeff *= &e.coeff;
                    match child {
                        // Mul directly under Mul: splice its factors
                        Node::Sum { mut terms, .. } if terms.len() == 1 => {
                            let t = terms.pop().expect("one term");
                            coeff *= t.coeff;
                            factors.extend(t.factors);
                        }
                        other => factors.push(other),
                    }
                }
                if factors.len() == 1 {
                    return Ok(Some(factors.pop().expect("one factor").scaled(&coeff)));
                }
                let t = Term { coeff, factors };
                let poly = term_poly(nvars, &t);
                let degree = t.factors.iter().map(Node::degree).sum();
                Ok(Some(Node::Sum {
                    terms: vec![t],
                    poly,
                    degree,
                }))
            }
            Gate::Add(es) => {
                let mut terms = Vec::new();
                for e in es {
                    match self.node(e.child)? {
                        None => {}
                        Some(Node::Lin(p)) => terms.push(Term {
                            coeff: e.coeff.clone(),
                            factors: vec![Node::Lin(p)],
                        }),
                        Some(Node::Sum { terms: ts, .. }) => {
                            terms.extend(ts.into_iter().map(|t| Term {
                                coeff: t.coeff * &e.coeff,
                                factors: t.factors,
                            }))
                        }
                    }
                }
                let mut poly = Polynomial::zero(nvars, Field::Rational);
                for t in &terms {
                    poly = &poly + &term_poly(nvars, t);
                }
                let degree = match poly.homogeneity() {
                    Homogeneity::Zero => return Ok(None),
                    Homogeneity::Inhomogeneous => return Err(Error::Inhomogeneous),
                    Homogeneity::Degree(d) => d,
                };
                // terms of other degrees cancel among themselves; disconnect them
                terms.retain(|t| t.factors.iter().map(Node::degree).sum::<u32>() == degree);
                if degree == 1 {
                    return Ok(Some(Node::Lin(poly)));
                }
                if terms.len() == 1 {
                    let t = terms.pop().expect("one term");
                    let poly = term_poly(nvars, &t);
                    return Ok(Some(Node::Sum {
                        terms: vec![t],
                        poly,
                        degree,
                    }));
                }
                Ok(Some(Node::Sum {
                    terms,
                    poly,
                    degree,
                }))
            }
        }
    }
}

/// Shape of a formula after the alternating-layer normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedStats {
    pub source_size: usize,
    pub normalized_size: usize,
    pub product_depth: u32,
    /// `None` for a formula computing 0.
    pub degree: Option<u32>,
}

fn normalize(f: &Formula) -> Result<Option<Node>> {
    if !f.eval().homogeneity().is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    Normalizer { f }.node(f.root())
}

pub fn normalize_stats(f: &Formula) -> Result<NormalizedStats> {
    let n = normalize(f)?;
    Ok(NormalizedStats {
        source_size: f.size(),
        normalized_size: n.as_ref().map_or(0, Node::size),
        product_depth: n.as_ref().map_or(0, Node::product_depth),
        degree: n.as_ref().map(Node::degree),
    })
}

/// Threshold `d0^{1/2^r}` compared exactly: `x >= d0^{1/2^r}` iff `x^{2^r} >= d0`.
#[derive(Clone, Copy)]
struct Threshold<'a> {
    d0: &'a BigUint,
    r: u32,
}

impl Threshold<'_> {
    fn reaches(&self, x: u64, shift: u32) -> bool {
        BigUint::from(x).pow(1u32 << (self.r + shift)) >= *self.d0
    }
}

fn decompose_sum(terms: &[Term], th: Threshold, nvars: u32, out: &mut Vec<Vec<Polynomial>>) {
    for t in terms {
        let scale = |mut fs: Vec<Polynomial>| {
            fs[0] = fs[0].scale_rational(&t.coeff).expect("rational field");
            fs
        };
        if t.factors.iter().all(|q| matches!(q, Node::Lin(_))) {
            out.push(scale(t.factors.iter().map(|q| q.poly().clone()).collect()));
            continue;
        }
        // Case 1: a factor of degree >= √(threshold)
        if let Some(j) = t
            .factors
            .iter()
            .position(|q| th.reaches(q.degree() as u64, 1))
        {
            let rest = t
                .factors
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, q)| q.poly());
            let d = Polynomial::product(nvars, Field::Rational, rest)
                .scale_rational(&t.coeff)
                .expect("rational field");
            let mut inner = Vec::new();
            match &t.factors[j] {
                Node::Lin(p) => inner.push(vec![p.clone()]),
                Node::Sum { terms, .. } => decompose_sum(
                    terms,
                    Threshold {
                        d0: th.d0,
                        r: th.r + 1,
                    },
                    nvars,
                    &mut inner,
                ),
            }
            for mut s in inner {
                if t.factors.len() == 1 {
                    s[0] = s[0].scale_rational(&t.coeff).expect("rational field");
                } else {
                    s.push(d.clone());
                }
                out.push(s);
            }
            continue;
        }
        // Case 2: merge the two lowest-degree factors while both are below √(threshold)/2
        let low = |deg: u64| !th.reaches(2 * deg, 1);
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
        let mut polys: Vec<Polynomial> = Vec::new();
        for q in &t.factors {
            heap.push(Reverse((q.degree() as u64, polys.len())));
            polys.push(q.poly().clone());
        }
        loop {
            let Some(Reverse((d1, i1))) = heap.pop() else {
                break;
            };
            match heap.peek() {
                Some(&Reverse((d2, i2))) if low(d1) && low(d2) => {
                    heap.pop();
                    let merged = &polys[i1] * &polys[i2];
                    heap.push(Reverse((d1 + d2, polys.len())));
                    polys.push(merged);
                }
                _ => {
                    heap.push(Reverse((d1, i1)));
                    break;
                }
            }
        }
        let mut live: Vec<usize> = heap.into_iter().map(|Reverse((_, i))| i).collect();
        live.sort_unstable();
        out.push(scale(live.into_iter().map(|i| polys[i].clone()).collect()));
    }
}

/// Decomposes a homogeneous formula of degree at least `d_threshold` following the
/// case split on factor degrees against `d^{2^{−r}}` at recursion level `r`.
pub fn low_depth_decompose(f: &Formula, d_threshold: u64) -> Result<ProductDecomposition> {
    if d_threshold == 0 {
        return Err(Error::InvalidParams("threshold must be positive".into()));
    }
    let node = normalize(f)?;
    let nvars = f.nvars();
    let mut summands = Vec::new();
    let normalized_size = node.as_ref().map_or(0, Node::size);
    if let Some(node) = node {
        if (node.degree() as u64) < d_threshold {
            return Err(Error::Precondition(format!(
                "degree {} below threshold {d_threshold}",
                node.degree()
            )));
        }
        match &node {
            Node::Lin(p) => summands.push(vec![p.clone()]),
            Node::Sum { terms, .. } => {
                let d0 = BigUint::from(d_threshold);
                decompose_sum(terms, Threshold { d0: &d0, r: 0 }, nvars, &mut summands);
            }
        }
    }
    Ok(ProductDecomposition {
        nvars,
        summands,
        source_size: f.size(),
        normalized_size,
    })
}
