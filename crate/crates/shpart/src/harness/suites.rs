use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use super::{Scale, Tally, VerifyConfig};
use crate::algebra::{
    binomial as choose, monomial_count_or_zero, Field, Polynomial, Scalar, DEFAULT_PRIME,
};
use crate::decompose::{
    check_lds_conditions, check_residue_floor, low_depth_decompose, low_depth_k, normalize_stats,
    upt_log_product_decompose,
};
use crate::formula::{
    all_trees, caterpillar, deg_seq, is_upt, isomorphic_bruteforce, parse_trees, upt_k, BinaryTree,
    Edge, Formula, FormulaBuilder, Gate, DEFAULT_PARSE_TREE_LIMIT,
};
use crate::hardpolys::{
    construct_unbiased_word, imm_polynomial, monomial_and_vandermonde, nw_count_identities,
    nw_polynomial, p_sigma, power_of_quadratic, word_polynomial, word_sp_generators,
    word_sp_lower_bound,
};
use crate::measures::{
    app_with_map, dense_rank, derivative_space_containment, pd_measure, product_app_bound,
    product_sp_bound, residue as residue_value, residue_bruteforce, skewp_measure, sp_measure,
    span_rank, Budget, MeasureConfig,
};
use crate::random::{
    random_composition, random_homogeneous, random_homogeneous_formula, random_linear_map,
    random_low_depth_formula, random_tree, random_upt_formula, rng_for,
};

fn measure_cfg(cfg: &VerifyConfig) -> MeasureConfig {
    MeasureConfig {
        field: cfg.field,
        budget: cfg.budget,
    }
}

fn pick(scale: Scale, small: usize, medium: usize) -> usize {
    match scale {
        Scale::Small => small,
        Scale::Medium => medium,
    }
}

fn ratio_pow(num: u64, den: u64, e: u32) -> BigRational {
    BigRational::new(BigInt::from(num).pow(e), BigInt::from(den).pow(e))
}

fn big(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// All tuples in `[1..=max]^t` for `t` in `1..=tmax`.
fn tuples(tmax: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..tmax {
        layer = layer
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub(super) fn residue(cfg: &VerifyConfig, t: &mut Tally) {
    let max = pick(cfg.scale, 6, 7) as u64;
    for degs in tuples(4, max) {
        let d: u64 = degs.iter().sum();
        for k in 0..d {
            let case = || format!("k={k} degrees={degs:?}");
            let (Some(a), Some(b)) = (
                t.result(residue_value(k, &degs), case),
                t.result(residue_bruteforce(k, &degs, d as i64), case),
            ) else {
                continue;
            };
            t.check(a.value == b.value, case, || {
                format!("closed form {} vs search {}", a.value, b.value)
            });
            let half = BigRational::new(BigInt::from(k), BigInt::from(2));
            t.check(a.value <= half, case, || {
                format!("residue {} above k/2", a.value)
            });
        }
    }
}

pub(super) fn binomial(cfg: &VerifyConfig, t: &mut Tally) {
    let amax = pick(cfg.scale, 40, 60) as u64;
    let m = |a: u64, b: u64| big(monomial_count_or_zero(a, b));
    for a in 1..=amax {
        for b in 1..=a {
            let mab = m(a, b);
            t.check(
                ratio_pow(a, b, b as u32) <= mab && mab <= ratio_pow(6 * a, b, b as u32),
                || format!("item1 a={a} b={b}"),
                || format!("M(a,b) = {mab}"),
            );
            for c in 1..=b {
                let r = m(a, b + c) / &mab;
                t.check(
                    ratio_pow(a, 2 * b, c as u32) <= r && r <= ratio_pow(2 * a, b, c as u32),
                    || format!("item2 a={a} b={b} c={c}"),
                    || format!("ratio {r}"),
                );
            }
        }
    }
    for b in 1..=amax {
        for c in 1..=b {
            for d in 1..=10u64 {
                let r = m(c, d) / m(b, d);
                t.check(
                    r >= ratio_pow(c, b, d as u32),
                    || format!("item3 b={b} c={c} d={d}"),
                    || format!("ratio {r}"),
                );
            }
        }
    }
}

/// Random homogeneous factors with `n <= 3`, `t <= 3` and total degree `<= 6`.
fn random_factors<R: Rng>(rng: &mut R, field: Field) -> (u32, Vec<Polynomial>) {
    let n = rng.gen_range(1..=3);
    let parts = rng.gen_range(1..=3u32);
    let d = rng.gen_range(parts..=6);
    let degs = random_composition(rng, d, parts);
    let qs = degs
        .iter()
        .map(|&di| {
            let terms = rng.gen_range(1..=3);
            random_homogeneous(rng, n, di, terms, field)
        })
        .collect();
    (n, qs)
}

pub(super) fn containment(cfg: &VerifyConfig, t: &mut Tally) {
    let count = pick(cfg.scale, 200, 400);
    let results: Vec<Vec<(String, crate::Result<bool>)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, "containment", i as u64);
            let (n, qs) = random_factors(&mut rng, Field::Rational);
            let degs: Vec<u32> = qs.iter().map(|q| q.degree().unwrap_or(0)).collect();
            let d: u32 = degs.iter().sum();
            (0..d as u64)
                .map(|k| {
                    let case = format!("instance={i} n={n} degrees={degs:?} k={k}");
                    (case, derivative_space_containment(&qs, k).map(|c| c.holds))
                })
                .collect()
        })
        .collect();
    for (case, r) in results.into_iter().flatten() {
        if let Some(holds) = t.result(r, || case.clone()) {
            t.check(
                holds,
                || case,
                || "derivative escapes the right-hand side".into(),
            );
        }
    }
}

pub(super) fn product_bounds(cfg: &VerifyConfig, t: &mut Tally) {
    let count = pick(cfg.scale, 100, 200);
    let mc = measure_cfg(cfg);
    for i in 0..count {
        let mut rng = rng_for(cfg.seed, "product-bounds", i as u64);
        let (n, qs) = random_factors(&mut rng, cfg.field);
        let degs: Vec<u64> = qs.iter().map(|q| q.degree().unwrap_or(0) as u64).collect();
        let d: u64 = degs.iter().sum();
        let p = Polynomial::product(n, cfg.field, qs.iter());
        let n0 = rng.gen_range(1..=3);
        let l_map = random_linear_map(&mut rng, n, n0, cfg.field);
        for k in 0..d {
            for l in 0..=1u64 {
                let case = || format!("instance={i} n={n} degrees={degs:?} k={k} l={l}");
                let (Some(sp), Some(bound)) = (
                    t.result(sp_measure(&p, k as u32, l as u32, &mc), case),
                    t.result(product_sp_bound(n as u64, &degs, k, l), case),
                ) else {
                    continue;
                };
                t.check(BigUint::from(sp.dimension) <= bound, case, || {
                    format!("SP {} > {bound}", sp.dimension)
                });
            }
            let case = || format!("instance={i} n={n} degrees={degs:?} k={k} n0={n0}");
            let (Some(app), Some(bound)) = (
                t.result(app_with_map(&p, k as u32, &l_map, &mc), case),
                t.result(product_app_bound(n as u64, &degs, k, n0 as u64), case),
            ) else {
                continue;
            };
            t.check(BigUint::from(app.dimension) <= bound, case, || {
                format!("APP {} > {bound}", app.dimension)
            });
        }
    }
}

pub(super) fn subadditivity(cfg: &VerifyConfig, t: &mut Tally) {
    let count = pick(cfg.scale, 100, 200);
    let mc = measure_cfg(cfg);
    for i in 0..count {
        let mut rng = rng_for(cfg.seed, "subadditivity", i as u64);
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(2..=4);
        let (tp, tq) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let p = random_homogeneous(&mut rng, n, d, tp, cfg.field);
        let q = random_homogeneous(&mut rng, n, d, tq, cfg.field);
        let c1 = nonzero(&mut rng);
        let c2 = nonzero(&mut rng);
        let sum =
            &p.scale(&Scalar::from_int(c1, cfg.field)) + &q.scale(&Scalar::from_int(c2, cfg.field));
        let k = rng.gen_range(0..d);
        let l = rng.gen_range(0..=2);
        let n0 = rng.gen_range(2..=3);
        let l_map = random_linear_map(&mut rng, n, n0, cfg.field);
        let case = || format!("instance={i} n={n} d={d} c1={c1} c2={c2} k={k} l={l} n0={n0}");
        let sp = |x: &Polynomial| sp_measure(x, k, l, &mc).map(|r| r.dimension);
        if let (Some(a), Some(b), Some(c)) = (
            t.result(sp(&sum), case),
            t.result(sp(&p), case),
            t.result(sp(&q), case),
        ) {
            t.check(a <= b + c, case, || format!("SP {a} > {b} + {c}"));
        }
        let app = |x: &Polynomial| app_with_map(x, k, &l_map, &mc).map(|r| r.dimension);
        if let (Some(a), Some(b), Some(c)) = (
            t.result(app(&sum), case),
            t.result(app(&p), case),
            t.result(app(&q), case),
        ) {
            t.check(a <= b + c, case, || format!("APP {a} > {b} + {c}"));
        }
    }
}

fn nonzero<R: Rng>(rng: &mut R) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

pub(super) fn trees(cfg: &VerifyConfig, t: &mut Tally) {
    let max = pick(cfg.scale, 9, 10) as u32;
    for n in 1..=max {
        let ts = all_trees(n);
        let cans: Vec<BinaryTree> = ts.iter().map(BinaryTree::canonical).collect();
        for (tr, c) in ts.iter().zip(&cans) {
            t.check(
                c.is_right_heavy() && c.leaves() == n && c.canonical() == *c,
                || format!("tree {tr}"),
                || format!("canonical form {c}"),
            );
        }
        let mismatches: Vec<(usize, usize)> = (0..ts.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let (ts, cans) = (&ts, &cans);
                (i + 1..ts.len())
                    .filter(move |&j| (cans[i] == cans[j]) != isomorphic_bruteforce(&ts[i], &ts[j]))
                    .map(move |j| (i, j))
            })
            .collect();
        let pairs = ts.len() * ts.len().saturating_sub(1) / 2;
        t.cases += pairs.saturating_sub(mismatches.len());
        for (i, j) in mismatches {
            t.fail(
                format!("trees {} and {}", ts[i], ts[j]),
                "canonical equality disagrees with isomorphism".into(),
            );
        }
    }
}

fn canonical_trees(n: u32) -> Vec<BinaryTree> {
    let set: BTreeSet<String> = all_trees(n)
        .iter()
        .map(|t| t.canonical().encoding())
        .collect();
    set.iter()
        .map(|s| BinaryTree::parse(s).expect("own encoding"))
        .collect()
}

pub(super) fn degseq(cfg: &VerifyConfig, t: &mut Tally) {
    let max = pick(cfg.scale, 12, 13) as u32;
    for n in 1..=max {
        for c in canonical_trees(n) {
            let case = || format!("tree {c}");
            let Some(ds) = t.result(deg_seq(&c), case) else {
                continue;
            };
            let v = ds.violations();
            let ok = v.is_empty()
                && ds.degrees.iter().sum::<u64>() == n as u64
                && ds.degrees.last() == Some(&1)
                && ds.suffixes.last() == Some(&0);
            t.check(ok, case, || {
                format!("degrees {:?}: {}", ds.degrees, v.join("; "))
            });
        }
    }
}

pub(super) fn uptk(cfg: &VerifyConfig, t: &mut Tally) {
    let tr = caterpillar(81).canonical();
    if let Ok(trace) = deg_seq(&tr).and_then(|ds| upt_k(&ds)) {
        t.check(
            trace.k == 3 && trace.m == 1 && trace.a.first() == Some(&1),
            || "caterpillar d=81".into(),
            || format!("m={} a={:?} k={}", trace.m, trace.a, trace.k),
        );
    } else {
        t.fail("caterpillar d=81".into(), "trace failed".into());
    }
    let count = pick(cfg.scale, 120, 300);
    let mut shapes: Vec<(String, BinaryTree)> = Vec::new();
    for d in (81..=729).step_by(37) {
        shapes.push((format!("caterpillar d={d}"), caterpillar(d)));
    }
    for i in 0..count {
        let mut rng = rng_for(cfg.seed, "uptk", i as u64);
        let d = rng.gen_range(81..=729);
        shapes.push((format!("random tree {i} d={d}"), random_tree(&mut rng, d)));
    }
    let mut ks: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    let mut below = Vec::new();
    for (name, s) in shapes {
        let c = s.canonical();
        let Some(trace) = t.result(deg_seq(&c).and_then(|ds| upt_k(&ds)), || name.clone()) else {
            continue;
        };
        if trace.m == 0 {
            continue;
        }
        let d = trace.d;
        // α >= a_1/27 = 1/27 always gives k >= ⌊d/27⌋, and ⌊d/27⌋ >= d/30 once d >= 270
        t.check(
            trace.k >= d / 27 && 2 * trace.k <= d,
            || name.clone(),
            || format!("k = {} outside [⌊d/27⌋, d/2]", trace.k),
        );
        if d == 81 || d >= 270 {
            t.check(
                30 * trace.k >= d,
                || name.clone(),
                || format!("k = {} below d/30", trace.k),
            );
        } else if 30 * trace.k < d {
            below.push(d);
        }
        let e = ks.entry(trace.m).or_insert((u64::MAX, 0));
        e.0 = e.0.min(trace.k);
        e.1 = e.1.max(trace.k);
    }
    for (m, (lo, hi)) in ks {
        t.note(format!("m={m}: k ranges over [{lo}, {hi}]"));
    }
    if !below.is_empty() {
        below.sort_unstable();
        below.dedup();
        let list: Vec<String> = below.iter().map(|d| format!("d={d}")).collect();
        t.note(format!(
            "k = ⌊d/27⌋ < d/30 for 81 < d < 270 at {}",
            list.join(" ")
        ));
    }
}

/// A random formula with `n <= 4`, degree `<= 8` and at most 30 gates.
fn corpus_formula(seed: u64, label: &str, i: u64) -> Formula {
    for attempt in 0.. {
        let mut rng = rng_for(seed, label, i * 1000 + attempt);
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(2..=8);
        let f = if rng.gen_bool(0.5) {
            let depth = rng.gen_range(1..=3);
            random_low_depth_formula(&mut rng, n, d, depth, 3)
        } else {
            random_homogeneous_formula(&mut rng, n, d, 3)
        };
        if f.size() <= 30 && !f.eval().is_zero() {
            return f;
        }
    }
    unreachable!()
}

fn upt_corpus_formula(seed: u64, i: u64) -> Formula {
    for attempt in 0.. {
        let mut rng = rng_for(seed, "decompose-upt", i * 1000 + attempt);
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=8);
        let shape = random_tree(&mut rng, d);
        let f = random_upt_formula(&mut rng, n, &shape, 3);
        if f.size() <= 30 {
            return f;
        }
    }
    unreachable!()
}

pub(super) fn decompose_lowdepth(cfg: &VerifyConfig, t: &mut Tally) {
    let count = pick(cfg.scale, 200, 500);
    let mut floors: BTreeMap<(u64, u32), BigRational> = BTreeMap::new();
    for i in 0..count as u64 {
        let f = corpus_formula(cfg.seed, "decompose-lowdepth", i);
        let case = || format!("formula {i} (size {})", f.size());
        let Some(stats) = t.result(normalize_stats(&f), case) else {
            continue;
        };
        let (Some(d), delta) = (stats.degree, stats.product_depth.max(1)) else {
            continue;
        };
        let Some(dec) = t.result(low_depth_decompose(&f, d as u64), case) else {
            continue;
        };
        t.check(dec.recombine() == f.eval(), case, || {
            "recombination differs".into()
        });
        t.check(
            dec.s() <= stats.normalized_size && dec.s() <= f.size(),
            case,
            || {
                format!(
                    "s = {} above sizes {} / {}",
                    dec.s(),
                    stats.normalized_size,
                    f.size()
                )
            },
        );
        t.check(dec.factors_homogeneous(), case, || {
            "inhomogeneous factor".into()
        });
        let lds = check_lds_conditions(&dec, d as u64, delta);
        t.check(lds.holds, case, || {
            format!(
                "structural condition fails at Δ = {delta}: {:?}",
                lds.verdicts
            )
        });
        let p = low_depth_k(d as u64, delta);
        if let Ok(floor) = check_residue_floor(&dec, p.k, &BigRational::zero()) {
            if let Some(min) = floor.minimum {
                let e = floors
                    .entry((d as u64, delta))
                    .or_insert_with(|| min.clone());
                if min < *e {
                    *e = min;
                }
            }
        }
    }
    for ((d, delta), min) in floors {
        t.note(format!(
            "d={d} Δ={delta}: minimum residue {min} at k = {}",
            low_depth_k(d, delta).k
        ));
    }
}

pub(super) fn decompose_upt(cfg: &VerifyConfig, t: &mut Tally) {
    let count = pick(cfg.scale, 200, 500);
    for i in 0..count as u64 {
        let f = upt_corpus_formula(cfg.seed, i);
        let case = || format!("formula {i} (size {})", f.size());
        let Some(dec) = t.result(upt_log_product_decompose(&f), case) else {
            continue;
        };
        t.check(dec.recombine() == f.eval(), case, || {
            "recombination differs".into()
        });
        t.check(
            dec.s() <= dec.normalized_size && dec.s() <= f.size(),
            case,
            || format!("s = {} above size {}", dec.s(), dec.normalized_size),
        );
        let Some(Some(tree)) = t.result(is_upt(&f.binarize()), case) else {
            continue;
        };
        let Some(ds) = t.result(deg_seq(&tree), case) else {
            continue;
        };
        let uniform = (0..dec.s()).all(|j| dec.degrees(j) == ds.degrees);
        t.check(uniform, case, || {
            format!("summand degrees differ from {:?}", ds.degrees)
        });
    }
    upt_detection(cfg, t);
}

fn copy_gate(f: &Formula, g: usize, b: &mut FormulaBuilder) -> usize {
    match f.gate(g) {
        Gate::Input(v) => b.input(*v),
        Gate::Add(es) | Gate::Mul(es) => {
            let kids: Vec<Edge> = es
                .iter()
                .map(|e| Edge {
                    child: copy_gate(f, e.child, b),
                    coeff: e.coeff.clone(),
                })
                .collect();
            b.push(if f.gate(g).is_mul() {
                Gate::Mul(kids)
            } else {
                Gate::Add(kids)
            })
        }
    }
}

fn sum_of(f1: &Formula, f2: &Formula) -> Formula {
    let mut b = FormulaBuilder::new();
    let r1 = copy_gate(f1, f1.root(), &mut b);
    let r2 = copy_gate(f2, f2.root(), &mut b);
    let root = b.add(&[r1, r2]);
    b.build(root, f1.nvars().max(f2.nvars()))
        .expect("disjoint copies form a tree")
}

/// Bottom-up UPT detection against canonical forms of all enumerated parse trees.
fn upt_detection(cfg: &VerifyConfig, t: &mut Tally) {
    let count = pick(cfg.scale, 300, 600);
    let (mut upt, mut other) = (0usize, 0usize);
    for i in 0..count as u64 {
        let f = (0..)
            .map(|attempt| {
                let mut rng = rng_for(cfg.seed, "upt-detect", i * 1000 + attempt);
                let n = rng.gen_range(1..=4);
                let d = rng.gen_range(1..=6);
                match i % 3 {
                    0 => {
                        let shape = random_tree(&mut rng, d);
                        random_upt_formula(&mut rng, n, &shape, 3).binarize()
                    }
                    1 => random_homogeneous_formula(&mut rng, n, d.max(3), 2).binarize(),
                    _ => {
                        // two UPT formulas of different shapes under one sum
                        let d = d.clamp(4, 5);
                        let s1 = caterpillar(d);
                        let s2 = (0..)
                            .map(|_| random_tree(&mut rng, d))
                            .find(|x| x.canonical() != s1.canonical())
                            .unwrap();
                        let f1 = random_upt_formula(&mut rng, n, &s1, 1);
                        let f2 = random_upt_formula(&mut rng, n, &s2, 1);
                        sum_of(&f1, &f2).binarize()
                    }
                }
            })
            .find(|f| f.size() <= 25)
            .expect("some attempt fits");
        let case = || format!("detection formula {i} (size {})", f.size());
        let Some(fast) = t.result(is_upt(&f), case) else {
            continue;
        };
        let Some(all) = t.result(parse_trees(&f, DEFAULT_PARSE_TREE_LIMIT), case) else {
            continue;
        };
        if all.truncated {
            t.note(format!("detection formula {i}: parse trees truncated"));
            continue;
        }
        let cans: BTreeSet<String> = all.trees.iter().map(|x| x.canonical().encoding()).collect();
        let oracle = if cans.len() == 1 {
            BinaryTree::parse(cans.iter().next().unwrap()).ok()
        } else {
            None
        };
        if fast.is_some() {
            upt += 1;
        } else {
            other += 1;
        }
        t.check(fast == oracle, case, || {
            format!(
                "bottom-up {:?} vs enumeration {:?}",
                fast.map(|x| x.encoding()),
                cans
            )
        });
    }
    t.note(format!("detection corpus: {upt} UPT, {other} not UPT"));
}

pub(super) fn hardpolys(cfg: &VerifyConfig, t: &mut Tally) {
    let b = cfg.budget;
    for h in 1..=4u64 {
        for d in 2..=8u64 {
            for k in 1..=d / 2 {
                let case = || format!("word h={h} d={d} k={k}");
                let Some(w) = t.result(construct_unbiased_word(h, d, k), case) else {
                    continue;
                };
                let neg_bits: u64 = w
                    .weights()
                    .iter()
                    .filter(|&&x| x < 0)
                    .map(|x| x.unsigned_abs())
                    .sum();
                t.check(
                    w.is_unbiased() && w.sum() == 0 && neg_bits == h * k,
                    case,
                    || format!("word {:?}", w.weights()),
                );
                if w.n() <= 24 {
                    let Some(p) = t.result(word_polynomial(&w, Field::Rational, &b), case) else {
                        continue;
                    };
                    t.check(w.m_minus().len() as u64 == 1 << (h * k), case, || {
                        "|M₋| differs from 2^(hk)".into()
                    });
                    for l in 0..=1 {
                        let Some(gens) = t.result(word_sp_generators(&w, &p, l, &b), case) else {
                            continue;
                        };
                        let Some(rank) = t.result(span_rank(&gens, &b), case) else {
                            continue;
                        };
                        let bound = word_sp_lower_bound(&w, l);
                        t.check(BigUint::from(rank) >= bound, case, || {
                            format!("l={l}: rank {rank} below {bound}")
                        });
                    }
                }
            }
        }
    }
    word_rank_instance(t);

    let ok = imm_polynomial(2, 2, Field::Rational, &b)
        .map(|p| p.to_string() == "x1*x5 + x2*x7")
        .unwrap_or(false);
    t.check(
        ok,
        || "imm n=2 d=2".into(),
        || "unexpected polynomial".into(),
    );
    for n in 1..=3u32 {
        for d in 1..=4u32 {
            let case = || format!("imm n={n} d={d}");
            if let Some(p) = t.result(imm_polynomial(n, d, Field::Rational, &b), case) {
                t.check(
                    p.num_terms() == (n as usize).pow(d - 1) && p.homogeneity().degree() == Some(d),
                    case,
                    || format!("{} terms", p.num_terms()),
                );
            }
        }
    }
    for (n, d, delta) in [
        (20u32, 3u32, 1u32),
        (60, 5, 1),
        (20, 4, 2),
        (40, 6, 2),
        (50, 9, 2),
        (20, 3, 3),
    ] {
        let case = || format!("psigma n={n} d={d} Δ={delta}");
        let Some(ps) = t.result(p_sigma(n, d, delta, Field::Rational, &b), case) else {
            continue;
        };
        let expect = monomial_count_or_zero(ps.n1 as u64, ps.k as u64);
        let Some(app) = t.result(
            app_with_map(&ps.polynomial, ps.k, &ps.projection, &measure_cfg(cfg)),
            case,
        ) else {
            continue;
        };
        t.check(
            BigUint::from(app.dimension) == expect
                && BigUint::from(ps.polynomial.num_terms()) == expect
                && ps.polynomial.homogeneity().degree() == Some(d),
            case,
            || format!("APP {} vs M(n1,k) = {expect}", app.dimension),
        );
    }
    for n in 1..=3u32 {
        for e in 1..=3u32 {
            let case = || format!("quadratic power n={n} e={e}");
            let Some(q) = t.result(power_of_quadratic(n, e, Field::Rational, &b), case) else {
                continue;
            };
            let Some(pd) = t.result(pd_measure(&q, 1, &measure_cfg(cfg)), case) else {
                continue;
            };
            t.check(
                pd.dimension == n as usize && q.homogeneity().degree() == Some(2 * e),
                case,
                || format!("PD_1 = {}", pd.dimension),
            );
        }
    }
}

/// The `(h, d, k) = (2, 4, 2)` word at `ℓ = ⌊n·d/n0⌋`, checked by full rank.
fn word_rank_instance(t: &mut Tally) {
    let case = || "word h=2 d=4 k=2 full shift".to_string();
    let Some(w) = t.result(construct_unbiased_word(2, 4, 2), case) else {
        return;
    };
    let n0 = w.negative_vars().len() as u32;
    let l = w.n() * 4 / n0;
    let b = Budget::unlimited();
    let Some(p) = t.result(word_polynomial(&w, Field::Rational, &b), case) else {
        return;
    };
    let Some(gens) = t.result(word_sp_generators(&w, &p, l, &b), case) else {
        return;
    };
    let Some(rank) = t.result(span_rank(&gens, &b), case) else {
        return;
    };
    let bound = word_sp_lower_bound(&w, l);
    t.check(BigUint::from(rank) >= bound, case, || {
        format!("rank {rank} below {bound}")
    });
    t.note(format!(
        "word (2,4,2): l = {l}, rank of y^l·∂P_w = {rank}, bound {bound}"
    ));
}

pub(super) fn nw_identities(cfg: &VerifyConfig, t: &mut Tally) {
    let mc = measure_cfg(cfg);
    let mut outside = Vec::new();
    for q in [2u64, 3, 5] {
        for d in 1..=5u64 {
            for k in 1..=d {
                if d - k < k + 1 {
                    continue;
                }
                let case = || format!("NW q={q} d={d} k={k}");
                if d > q {
                    t.check(
                        nw_polynomial(q, d, k, cfg.field, &cfg.budget).is_err(),
                        case,
                        || "constructed with d > q".into(),
                    );
                    outside.push(format!("({q},{d},{k})"));
                    continue;
                }
                let Some(p) = t.result(nw_polynomial(q, d, k, cfg.field, &cfg.budget), case) else {
                    continue;
                };
                let Some(r) = t.result(pd_measure(&p, k as u32, &mc), case) else {
                    continue;
                };
                let expect = choose(d, k) * BigUint::from(q).pow(k as u32);
                t.check(BigUint::from(r.dimension) == expect, case, || {
                    format!("PD {} vs {expect}", r.dimension)
                });
            }
        }
    }
    t.note(format!(
        "outside the construction domain d <= q: {}",
        outside.join(" ")
    ));
    for q in [2u64, 3] {
        for d in 2..=4u64 {
            for k in 1..=2u64.min(d - 1) {
                for l in 0..=2u64 {
                    let case = || format!("counting q={q} d={d} k={k} l={l}");
                    let Some(r) = t.result(nw_count_identities(q, d, k, l, true), case) else {
                        continue;
                    };
                    let direct_sum = r.direct_sum_t_h.map(BigUint::from);
                    t.check(direct_sum.as_ref() == Some(&r.sum_t_h), case, || {
                        format!(
                            "Σ|T_h| formula {} vs enumeration {:?}",
                            r.sum_t_h, r.direct_sum_t_h
                        )
                    });
                    let direct_t = BigInt::from(r.direct_t.unwrap_or(0));
                    t.check(direct_t >= r.ie_lower, case, || {
                        format!("|T| = {direct_t} below {}", r.ie_lower)
                    });
                    let pw = r.pairwise_exact.clone().unwrap_or_default();
                    t.check(pw <= r.chi_sum, case, || {
                        format!("pairwise {pw} above Σχ = {}", r.chi_sum)
                    });
                }
            }
        }
    }
}

pub(super) fn app_vs_skewp(cfg: &VerifyConfig, t: &mut Tally) {
    let mc = measure_cfg(cfg);
    for n in 1..=8u32 {
        for k in 0..=3u32.min(n) {
            let case = || format!("vandermonde n={n} k={k}");
            let Some((p, l)) = t.result(monomial_and_vandermonde(n, k + 1, cfg.field), case) else {
                continue;
            };
            let Some(r) = t.result(app_with_map(&p, k, &l, &mc), case) else {
                continue;
            };
            let expect = choose(n as u64, k as u64);
            t.check(BigUint::from(r.dimension) == expect, case, || {
                format!("APP {} vs {expect}", r.dimension)
            });
        }
    }
    for n in 1..=6u32 {
        let Ok((p, _)) = monomial_and_vandermonde(n, 1, cfg.field) else {
            continue;
        };
        for mask in 0u32..(1 << n) {
            let ys: Vec<u32> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            for k in 0..=ys.len() as u32 {
                let case = || format!("skewp n={n} y={ys:?} k={k}");
                let Some(r) = t.result(skewp_measure(&p, &ys, k, &mc), case) else {
                    continue;
                };
                t.check(r.dimension <= 1, case, || {
                    format!("SkewP = {}", r.dimension)
                });
            }
        }
    }
}

pub(super) fn rank_fields(cfg: &VerifyConfig, t: &mut Tally) {
    const PRIMES: [u64; 3] = [DEFAULT_PRIME, 1_000_000_007, 998_244_353];
    let count = pick(cfg.scale, 100, 300);
    let b = cfg.budget;
    for i in 0..count {
        let mut rng = rng_for(cfg.seed, "rank-fields", i as u64);
        let n = rng.gen_range(2..=4);
        let mut polys: Vec<Polynomial> = Vec::new();
        for _ in 0..rng.gen_range(2..=8) {
            let d = rng.gen_range(1..=3);
            let p = if polys.len() >= 2 && rng.gen_bool(0.4) {
                // a combination of earlier members forces a rank deficiency
                let a = &polys[rng.gen_range(0..polys.len())];
                let c = &polys[rng.gen_range(0..polys.len())];
                &a.scale(&Scalar::from_int(nonzero(&mut rng), Field::Rational))
                    + &c.scale(&Scalar::from_int(nonzero(&mut rng), Field::Rational))
            } else {
                let terms = rng.gen_range(1..=4);
                random_homogeneous(&mut rng, n, d, terms, Field::Rational)
            };
            polys.push(p);
        }
        let case = || format!("set {i} ({} polynomials in {n} variables)", polys.len());
        let Some(r) = t.result(span_rank(&polys, &b), case) else {
            continue;
        };
        t.check(r == dense_rank(&polys), case, || {
            format!("sparse {r} vs dense {}", dense_rank(&polys))
        });
        for p in PRIMES {
            let reduced: crate::Result<Vec<Polynomial>> =
                polys.iter().map(|q| q.to_field(Field::Prime(p))).collect();
            let Some(reduced) = t.result(reduced, case) else {
                continue;
            };
            let Some(rp) = t.result(span_rank(&reduced, &b), case) else {
                continue;
            };
            t.check(rp == r, case, || {
                format!("rank {r} over Q vs {rp} over F_{p}")
            });
        }
    }
}
