//! One PASS/FAIL line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::Rng;

use shpart::algebra::{Field, Polynomial, Scalar, DEFAULT_PRIME};
use shpart::decompose::{
    check_lds_conditions, low_depth_decompose, normalize_stats, upt_log_product_decompose,
};
use shpart::formula::{
    all_trees, caterpillar, deg_seq, is_upt, isomorphic_bruteforce, parse_trees, upt_k, BinaryTree,
    Edge, Formula, FormulaBuilder, Gate,
};
use shpart::hardpolys::{
    construct_unbiased_word, monomial_and_vandermonde, nw_count_identities, nw_polynomial,
    word_polynomial, word_sp_generators,
};
use shpart::harness::{run_all, run_suite, VerifyConfig};
use shpart::measures::{
    app_with_map, dense_rank, derivative_space_containment, pd_measure, product_app_bound,
    product_sp_bound, residue, residue_bruteforce, skewp_measure, sp_measure, span_rank, Budget,
    MeasureConfig,
};
use shpart::random::{
    random_composition, random_homogeneous, random_homogeneous_formula, random_linear_map,
    random_low_depth_formula, random_tree, random_upt_formula, rng_for,
};

const SEED: u64 = 42;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn verdict(failures: &[String], ok_detail: String) -> Outcome {
    match failures.first() {
        None => pass(ok_detail),
        Some(f) => fail(format!("{} failures, first: {f}", failures.len())),
    }
}

fn q(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn qpow(a: u64, b: u64, e: u64) -> BigRational {
    BigRational::new(BigInt::from(a).pow(e as u32), BigInt::from(b).pow(e as u32))
}

/// `M(a, b) = C(a+b−1, b)` from the product formula.
fn monomials(a: u64, b: u64) -> BigRational {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..b {
        num *= a + i;
        den *= i + 1;
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn degree_tuples(tmax: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..tmax {
        let mut next = Vec::new();
        for t in &layer {
            for x in 1..=max {
                let mut t: Vec<u64> = t.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn c1_residue_oracle() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for degs in degree_tuples(4, 6) {
        let d: u64 = degs.iter().sum();
        for k in 0..d {
            cases += 1;
            let a = residue(k, &degs).unwrap();
            let b = residue_bruteforce(k, &degs, d as i64).unwrap();
            if a.value != b.value {
                failures.push(format!("k={k} {degs:?}: {} vs {}", a.value, b.value));
            }
        }
    }
    // the scan above is per coordinate; a joint box scan confirms it for two factors
    for degs in degree_tuples(2, 6).into_iter().filter(|t| t.len() == 2) {
        let d: i64 = degs.iter().sum::<u64>() as i64;
        for k in 0..d {
            let mut best = i64::MAX;
            for k1 in -d..=d {
                for k2 in -d..=d {
                    let dev =
                        (d * k1 - k * degs[0] as i64).abs() + (d * k2 - k * degs[1] as i64).abs();
                    best = best.min(dev);
                }
            }
            let joint = BigRational::new(BigInt::from(best), BigInt::from(2 * d));
            if residue(k as u64, &degs).unwrap().value != joint {
                failures.push(format!("joint scan k={k} {degs:?}"));
            }
        }
    }
    verdict(&failures, format!("{cases} (k, degrees) pairs"))
}

fn c2_residue_ceiling() -> Outcome {
    let mut failures = Vec::new();
    for degs in degree_tuples(4, 6) {
        let d: u64 = degs.iter().sum();
        for k in 0..d {
            let v = residue(k, &degs).unwrap().value;
            if v > q(k, 2) || v < q(0, 1) {
                failures.push(format!("k={k} {degs:?}: {v}"));
            }
        }
    }
    verdict(&failures, "0 <= residue <= k/2 on the full grid".into())
}

fn c3_binomial() -> Outcome {
    let mut failures = Vec::new();
    for a in 1..=40u64 {
        for b in 1..=a {
            let mab = monomials(a, b);
            if !(qpow(a, b, b) <= mab && mab <= qpow(6 * a, b, b)) {
                failures.push(format!("item 1 a={a} b={b}"));
            }
            for c in 1..=b {
                let r = monomials(a, b + c) / &mab;
                if !(qpow(a, 2 * b, c) <= r && r <= qpow(2 * a, b, c)) {
                    failures.push(format!("item 2 a={a} b={b} c={c}"));
                }
                for d in 1..=10u64 {
                    if monomials(c, d) / monomials(b, d) < qpow(c, b, d) {
                        failures.push(format!("item 3 b={b} c={c} d={d}"));
                    }
                }
            }
        }
    }
    verdict(&failures, "1 <= c <= b <= a <= 40, d <= 10".into())
}

/// Random homogeneous factors with `n <= 3`, at most three of them, total degree `<= 6`.
fn factors(label: &str, i: u64, field: Field) -> (u32, Vec<Polynomial>) {
    let mut rng = rng_for(SEED ^ 0xacce, label, i);
    let n = rng.gen_range(1..=3);
    let t = rng.gen_range(1..=3u32);
    let d = rng.gen_range(t..=6);
    let degs = random_composition(&mut rng, d, t);
    let qs = degs
        .iter()
        .map(|&di| {
            let terms = rng.gen_range(1..=3);
            random_homogeneous(&mut rng, n, di, terms, field)
        })
        .collect();
    (n, qs)
}

fn c4_containment() -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    for i in 0..200 {
        let (n, qs) = factors("containment", i, Field::Rational);
        let d: u32 = qs.iter().map(|q| q.degree().unwrap()).sum();
        for k in 0..d as u64 {
            checks += 1;
            match derivative_space_containment(&qs, k) {
                Ok(c) if c.holds => {}
                Ok(c) => {
                    failures.push(format!("instance {i} n={n} k={k}: witness {:?}", c.witness))
                }
                Err(e) => failures.push(format!("instance {i} k={k}: {e}")),
            }
        }
    }
    verdict(
        &failures,
        format!("200 instances, {checks} (instance, k) checks"),
    )
}

fn c5_product_bounds() -> Outcome {
    let cfg = MeasureConfig::default();
    let mut failures = Vec::new();
    let mut checks = 0;
    for i in 0..200 {
        let (n, qs) = factors("bounds", i, Field::Rational);
        let degs: Vec<u64> = qs.iter().map(|q| q.degree().unwrap() as u64).collect();
        let d: u64 = degs.iter().sum();
        let p = Polynomial::product(n, Field::Rational, qs.iter());
        let mut rng = rng_for(SEED, "bounds-map", i);
        let n0 = rng.gen_range(1..=3);
        let l = random_linear_map(&mut rng, n, n0, Field::Rational);
        for k in 0..d {
            for ell in 0..=2 {
                checks += 1;
                let sp = sp_measure(&p, k as u32, ell as u32, &cfg)
                    .unwrap()
                    .dimension;
                let bound = product_sp_bound(n as u64, &degs, k, ell).unwrap();
                if BigUint::from(sp) > bound {
                    failures.push(format!("SP instance {i} k={k} l={ell}: {sp} > {bound}"));
                }
            }
            checks += 1;
            let app = app_with_map(&p, k as u32, &l, &cfg).unwrap().dimension;
            let bound = product_app_bound(n as u64, &degs, k, n0 as u64).unwrap();
            if BigUint::from(app) > bound {
                failures.push(format!("APP instance {i} k={k}: {app} > {bound}"));
            }
        }
    }
    verdict(&failures, format!("{checks} measure-vs-bound comparisons"))
}

fn c6_subadditivity() -> Outcome {
    let cfg = MeasureConfig::default();
    let mut failures = Vec::new();
    for i in 0..100 {
        let mut rng = rng_for(SEED, "subadd", i);
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(2..=4);
        let (tp, tq) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let p = random_homogeneous(&mut rng, n, d, tp, Field::Rational);
        let qq = random_homogeneous(&mut rng, n, d, tq, Field::Rational);
        let c1 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { -1 } else { 1 };
        let c2 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { -1 } else { 1 };
        let s = &p.scale(&Scalar::from_int(c1, Field::Rational))
            + &qq.scale(&Scalar::from_int(c2, Field::Rational));
        let k = rng.gen_range(0..d);
        let ell = rng.gen_range(0..=2);
        let l = random_linear_map(&mut rng, n, 2, Field::Rational);
        let sp = |x: &Polynomial| sp_measure(x, k, ell, &cfg).unwrap().dimension;
        let app = |x: &Polynomial| app_with_map(x, k, &l, &cfg).unwrap().dimension;
        if sp(&s) > sp(&p) + sp(&qq) {
            failures.push(format!("SP triple {i}"));
        }
        if app(&s) > app(&p) + app(&qq) {
            failures.push(format!("APP triple {i}"));
        }
    }
    verdict(&failures, "100 triples, SP and APP".into())
}

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn c7_nw_dimension() -> Outcome {
    let cfg = MeasureConfig::default();
    let b = Budget::default();
    let mut failures = Vec::new();
    let (mut exact, mut outside) = (0, Vec::new());
    for q in [2u64, 3, 5] {
        for d in 1..=5u64 {
            for k in 1..=d {
                if d < 2 * k + 1 {
                    continue;
                }
                if d > q {
                    // the design needs d distinct points of F_q
                    if nw_polynomial(q, d, k, Field::Rational, &b).is_ok() {
                        failures.push(format!("q={q} d={d} k={k} accepted with d > q"));
                    }
                    outside.push(format!("({q},{d},{k})"));
                    continue;
                }
                let p = nw_polynomial(q, d, k, Field::Rational, &b).unwrap();
                let dim = pd_measure(&p, k as u32, &cfg).unwrap().dimension;
                let expect = binom(d, k) * BigUint::from(q).pow(k as u32);
                exact += 1;
                if BigUint::from(dim) != expect {
                    failures.push(format!("q={q} d={d} k={k}: {dim} vs {expect}"));
                }
            }
        }
    }
    verdict(
        &failures,
        format!(
            "{exact} instances with d <= q exact; outside the construction domain: {}",
            outside.join(" ")
        ),
    )
}

fn c8_vandermonde_skewp() -> Outcome {
    let cfg = MeasureConfig::default();
    let mut failures = Vec::new();
    for n in 1..=8u32 {
        for k in 0..=3u32.min(n) {
            let (p, l) = monomial_and_vandermonde(n, k + 1, Field::Rational).unwrap();
            let dim = app_with_map(&p, k, &l, &cfg).unwrap().dimension;
            if BigUint::from(dim) != binom(n as u64, k as u64) {
                failures.push(format!("APP n={n} k={k}: {dim}"));
            }
        }
    }
    for n in 1..=6u32 {
        let (p, _) = monomial_and_vandermonde(n, 1, Field::Rational).unwrap();
        for mask in 0u32..1 << n {
            let y: Vec<u32> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            for k in 0..=n {
                let dim = skewp_measure(&p, &y, k, &cfg).unwrap().dimension;
                if dim > 1 {
                    failures.push(format!("SkewP n={n} y={y:?} k={k}: {dim}"));
                }
            }
        }
    }
    verdict(
        &failures,
        "APP = C(n,k) for n <= 8, k <= 3; SkewP <= 1 on every y-subset for n <= 6".into(),
    )
}

fn c9_canonical_trees() -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0u64;
    for n in 1..=9 {
        let ts = all_trees(n);
        let cans: Vec<BinaryTree> = ts.iter().map(BinaryTree::canonical).collect();
        for (t, c) in ts.iter().zip(&cans) {
            if !c.is_right_heavy() || c.canonical() != *c || c.leaves() != n {
                failures.push(format!("{t}"));
            }
        }
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                pairs += 1;
                if (cans[i] == cans[j]) != isomorphic_bruteforce(&ts[i], &ts[j]) {
                    failures.push(format!("{} vs {}", ts[i], ts[j]));
                }
            }
        }
    }
    verdict(
        &failures,
        format!("all trees up to 9 leaves, {pairs} pairs"),
    )
}

fn copy_gate(f: &Formula, g: usize, b: &mut FormulaBuilder) -> usize {
    match f.gate(g) {
        Gate::Input(v) => b.input(*v),
        Gate::Add(es) | Gate::Mul(es) => {
            let kids = es
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

fn c10_upt_detection() -> Outcome {
    let mut failures = Vec::new();
    let (mut yes, mut no, mut tested) = (0, 0, 0);
    let mut i = 0u64;
    while tested < 300 {
        i += 1;
        let mut rng = rng_for(SEED, "detect", i);
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(2..=6);
        let f = match i % 3 {
            0 => {
                let shape = random_tree(&mut rng, d);
                random_upt_formula(&mut rng, n, &shape, 3)
            }
            1 => random_homogeneous_formula(&mut rng, n, d.max(3), 2),
            _ => {
                // two different shapes of the same degree, so the sum has no single parse tree
                let d = d.clamp(4, 5);
                let s1 = caterpillar(d);
                let s2 = (0..)
                    .map(|_| random_tree(&mut rng, d))
                    .find(|t| t.canonical() != s1.canonical())
                    .unwrap();
                let (f1, f2) = (
                    random_upt_formula(&mut rng, n, &s1, 1),
                    random_upt_formula(&mut rng, n, &s2, 1),
                );
                let mut b = FormulaBuilder::new();
                let (r1, r2) = (
                    copy_gate(&f1, f1.root(), &mut b),
                    copy_gate(&f2, f2.root(), &mut b),
                );
                let root = b.add(&[r1, r2]);
                b.build(root, n).unwrap()
            }
        }
        .binarize();
        if f.size() > 25 {
            continue;
        }
        tested += 1;
        let fast = is_upt(&f).unwrap();
        let all = parse_trees(&f, 100_000).unwrap();
        assert!(!all.truncated);
        let cans: BTreeSet<String> = all.trees.iter().map(|t| t.canonical().encoding()).collect();
        let oracle = (cans.len() == 1).then(|| cans.iter().next().unwrap().clone());
        if fast.is_some() {
            yes += 1;
        } else {
            no += 1;
        }
        if fast.map(|t| t.encoding()) != oracle {
            failures.push(format!("formula {i}"));
        }
    }
    verdict(
        &failures,
        format!("{tested} formulas ({yes} UPT, {no} not)"),
    )
}

fn c11_deg_seq() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=12u32 {
        let canon: BTreeSet<String> = all_trees(n)
            .iter()
            .map(|t| t.canonical().encoding())
            .collect();
        for enc in canon {
            count += 1;
            let t = BinaryTree::parse(&enc).unwrap();
            let ds = deg_seq(&t).unwrap();
            let (d, len) = (n as u64, ds.degrees.len());
            let e = &ds.suffixes;
            let mut ok = ds.degrees.iter().sum::<u64>() == d
                && ds.degrees[len - 1] == 1
                && e.len() == len + 1
                && e[0] == d
                && e[len] == 0;
            for i in 1..len {
                ok &= 3 * e[i] > e[i - 1] && 3 * e[i] <= 2 * e[i - 1];
            }
            // log_3 d + 1 <= t  and  t <= log_{3/2} d + 1
            let tt = len as u32 - 1;
            ok &= BigUint::from(d) <= BigUint::from(3u32).pow(tt);
            ok &= BigUint::from(3u32).pow(tt) <= BigUint::from(d) * BigUint::from(2u32).pow(tt);
            if !ok {
                failures.push(format!("{enc}: {:?}", ds.degrees));
            }
        }
    }
    verdict(
        &failures,
        format!("{count} canonical trees up to 12 leaves"),
    )
}

fn c12_upt_k() -> Outcome {
    let mut failures = Vec::new();
    let trace = |t: &BinaryTree| upt_k(&deg_seq(&t.canonical()).unwrap()).unwrap();
    let mut d81 = vec![caterpillar(81)];
    for i in 0..40 {
        d81.push(random_tree(&mut rng_for(SEED, "uptk-81", i), 81));
    }
    for t in &d81 {
        let tr = trace(t);
        if tr.k != 3 || tr.a.first() != Some(&1) {
            failures.push(format!("d=81 {}: k={} a={:?}", t.encoding(), tr.k, tr.a));
        }
    }
    let d81_count = d81.len();
    let mut corpus: Vec<BinaryTree> = d81;
    for d in [270u32, 300, 405, 500, 729, 1000, 2187] {
        corpus.push(caterpillar(d));
    }
    for i in 0..100 {
        let mut rng = rng_for(SEED, "uptk", i);
        let d = rng.gen_range(270..=2200);
        corpus.push(random_tree(&mut rng, d));
    }
    let mut with_m = 0;
    for t in &corpus {
        let tr = trace(t);
        if tr.m == 0 {
            continue;
        }
        with_m += 1;
        if !(30 * tr.k >= tr.d && 2 * tr.k <= tr.d) {
            failures.push(format!("d={}: k={}", tr.d, tr.k));
        }
    }
    // below d = 270 the step ⌊d/27⌋ >= d/30 can fail; counted, not asserted
    let below: Vec<u32> = (82..270)
        .filter(|&d| 30 * trace(&caterpillar(d)).k < d as u64)
        .collect();
    verdict(
        &failures,
        format!(
            "{} trees with d = 81 give k = 3, a1 = 1; {with_m} trees (d = 81 or d >= 270) in [d/30, d/2]; \
             {} of the caterpillars with 81 < d < 270 fall below d/30",
            d81_count,
            below.len()
        ),
    )
}

fn corpus_low_depth(i: u64) -> Formula {
    (0..)
        .map(|a| {
            let mut rng = rng_for(SEED, "corpus-ld", i * 1000 + a);
            let n = rng.gen_range(1..=4);
            let d = rng.gen_range(2..=8);
            if rng.gen_bool(0.5) {
                let depth = rng.gen_range(1..=3);
                random_low_depth_formula(&mut rng, n, d, depth, 3)
            } else {
                random_homogeneous_formula(&mut rng, n, d, 3)
            }
        })
        .find(|f| f.size() <= 30 && !f.eval().is_zero())
        .unwrap()
}

fn corpus_upt(i: u64) -> Formula {
    (0..)
        .map(|a| {
            let mut rng = rng_for(SEED, "corpus-upt", i * 1000 + a);
            let n = rng.gen_range(1..=4);
            let d = rng.gen_range(1..=8);
            let shape = random_tree(&mut rng, d);
            random_upt_formula(&mut rng, n, &shape, 3)
        })
        .find(|f| f.size() <= 30)
        .unwrap()
}

fn c13_recombination() -> Outcome {
    let mut failures = Vec::new();
    for i in 0..200 {
        let f = corpus_low_depth(i);
        let dec = low_depth_decompose(&f, f.eval().degree().unwrap() as u64).unwrap();
        if dec.recombine() != f.eval() || dec.s() > f.size() {
            failures.push(format!("low-depth formula {i}: s={}", dec.s()));
        }
        let g = corpus_upt(i);
        let dec = upt_log_product_decompose(&g).unwrap();
        let ds = deg_seq(&is_upt(&g.binarize()).unwrap().unwrap()).unwrap();
        if dec.recombine() != g.eval()
            || dec.s() > g.size()
            || (0..dec.s()).any(|j| dec.degrees(j) != ds.degrees)
        {
            failures.push(format!("UPT formula {i}: s={}", dec.s()));
        }
    }
    verdict(
        &failures,
        "200 low-depth and 200 UPT formulas (n <= 4, d <= 8, <= 30 gates)".into(),
    )
}

fn c14_lds_conditions() -> Outcome {
    let mut failures = Vec::new();
    let mut summands = 0;
    for i in 0..200 {
        let f = corpus_low_depth(i);
        let stats = normalize_stats(&f).unwrap();
        let d = stats.degree.unwrap() as u64;
        let dec = low_depth_decompose(&f, d).unwrap();
        let r = check_lds_conditions(&dec, d, stats.product_depth.max(1));
        summands += dec.s();
        if !r.holds {
            failures.push(format!("formula {i}: {:?}", r.verdicts));
        }
    }
    verdict(&failures, format!("{summands} summands over 200 formulas"))
}

fn c15_words() -> Outcome {
    let mut failures = Vec::new();
    let mut words = 0;
    for h in 1..=4u64 {
        for d in 2..=8u64 {
            for k in 1..=d / 2 {
                words += 1;
                let w = construct_unbiased_word(h, d, k).unwrap();
                let neg: u64 = w
                    .weights()
                    .iter()
                    .filter(|&&x| x < 0)
                    .map(|x| x.unsigned_abs())
                    .sum();
                let ok = w.is_unbiased() && w.weights().iter().sum::<i64>() == 0 && neg == h * k;
                let small_enough = w.n() <= 20;
                if !ok || (small_enough && w.m_minus().len() as u64 != 1 << (h * k)) {
                    failures.push(format!("h={h} d={d} k={k}: {:?}", w.weights()));
                }
            }
        }
    }
    let w = construct_unbiased_word(2, 4, 2).unwrap();
    let n = w.n() as u64;
    let n0 = w.negative_vars().len() as u64;
    let ell = (n * 4 / n0) as u32;
    let b = Budget::unlimited();
    let p = word_polynomial(&w, Field::Rational, &b).unwrap();
    let gens = word_sp_generators(&w, &p, ell, &b).unwrap();
    let rank = span_rank(&gens, &b).unwrap();
    let bound = monomials(n - n0, ell as u64) * BigRational::from_integer(BigInt::from(1u64 << 4));
    if BigRational::from_integer(BigInt::from(rank)) < bound {
        failures.push(format!("(2,4,2) rank {rank} below {bound}"));
    }
    verdict(
        &failures,
        format!("{words} words; (h,d,k) = (2,4,2) at l = {ell}: rank {rank} >= {bound}"),
    )
}

fn c16_nw_counting() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for q in [2u64, 3] {
        for d in 2..=4u64 {
            for k in 1..=2u64.min(d - 1) {
                for l in 0..=2u64 {
                    count += 1;
                    let r = nw_count_identities(q, d, k, l, true).unwrap();
                    let direct_sum = r.direct_sum_t_h.map(BigUint::from);
                    let direct_t = BigInt::from(r.direct_t.unwrap());
                    if direct_sum.as_ref() != Some(&r.sum_t_h) || direct_t < r.ie_lower {
                        failures.push(format!("q={q} d={d} k={k} l={l}"));
                    }
                }
            }
        }
    }
    verdict(
        &failures,
        format!("{count} instances: Σ|T_h| matches, inclusion-exclusion underbounds |T|"),
    )
}

fn c17_rank_fields() -> Outcome {
    let b = Budget::default();
    let mut failures = Vec::new();
    for i in 0..100 {
        let mut rng = rng_for(SEED, "fields", i);
        let n = rng.gen_range(2..=4);
        let mut set: Vec<Polynomial> = Vec::new();
        for _ in 0..rng.gen_range(2..=8) {
            let d = rng.gen_range(1..=3);
            let p = if set.len() >= 2 && rng.gen_bool(0.4) {
                let (a, c) = (rng.gen_range(0..set.len()), rng.gen_range(0..set.len()));
                let ca = Scalar::from_int(rng.gen_range(1..=4), Field::Rational);
                &set[a].scale(&ca) + &set[c]
            } else {
                let terms = rng.gen_range(1..=4);
                random_homogeneous(&mut rng, n, d, terms, Field::Rational)
            };
            set.push(p);
        }
        let r = span_rank(&set, &b).unwrap();
        if r != dense_rank(&set) {
            failures.push(format!("set {i}: sparse vs dense"));
        }
        for p in [DEFAULT_PRIME, 1_000_000_007, 998_244_353] {
            let red: Vec<Polynomial> = set
                .iter()
                .map(|x| x.to_field(Field::Prime(p)).unwrap())
                .collect();
            if span_rank(&red, &b).unwrap() != r {
                failures.push(format!("set {i}: F_{p}"));
            }
        }
    }
    verdict(&failures, "100 sets over Q and three primes".into())
}

fn c18_determinism() -> Outcome {
    let cfg = VerifyConfig {
        seed: 42,
        ..VerifyConfig::default()
    };
    let render = || {
        let v: Vec<_> = run_all(&cfg).iter().map(|r| r.to_json()).collect();
        serde_json::to_string(&v).unwrap()
    };
    let (a, b) = (render(), render());
    let failed: Vec<String> = shpart::harness::SUITES
        .iter()
        .filter(|s| !run_suite(s, &cfg).unwrap().passed())
        .map(|s| s.to_string())
        .collect();
    match (a == b, failed.is_empty()) {
        (true, true) => pass(format!("{} bytes, identical; every suite passes", a.len())),
        (false, _) => fail("reports differ between runs"),
        (true, false) => fail(format!(
            "identical, but failing suites: {}",
            failed.join(", ")
        )),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 18] = [
        (
            1,
            "residue oracle equivalence",
            Duration::from_secs(10),
            c1_residue_oracle,
        ),
        (
            2,
            "residue ceiling",
            Duration::from_secs(10),
            c2_residue_ceiling,
        ),
        (3, "binomial bounds", Duration::from_secs(5), c3_binomial),
        (
            4,
            "derivative-space containment",
            Duration::from_secs(180),
            c4_containment,
        ),
        (
            5,
            "product upper bounds",
            Duration::from_secs(120),
            c5_product_bounds,
        ),
        (
            6,
            "sub-additivity",
            Duration::from_secs(60),
            c6_subadditivity,
        ),
        (
            7,
            "NW derivative dimension",
            Duration::from_secs(30),
            c7_nw_dimension,
        ),
        (
            8,
            "Vandermonde APP and SkewP",
            Duration::from_secs(30),
            c8_vandermonde_skewp,
        ),
        (
            9,
            "canonical trees",
            Duration::from_secs(30),
            c9_canonical_trees,
        ),
        (
            10,
            "UPT detection",
            Duration::from_secs(60),
            c10_upt_detection,
        ),
        (
            11,
            "degree-sequence invariants",
            Duration::from_secs(30),
            c11_deg_seq,
        ),
        (
            12,
            "order selection trace",
            Duration::from_secs(10),
            c12_upt_k,
        ),
        (
            13,
            "decomposition recombination",
            Duration::from_secs(180),
            c13_recombination,
        ),
        (
            14,
            "structural conditions",
            Duration::from_secs(180),
            c14_lds_conditions,
        ),
        (15, "word construction", Duration::from_secs(120), c15_words),
        (
            16,
            "NW counting identities",
            Duration::from_secs(60),
            c16_nw_counting,
        ),
        (
            17,
            "cross-field rank",
            Duration::from_secs(60),
            c17_rank_fields,
        ),
        (18, "determinism", Duration::from_secs(600), c18_determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took <= limit;
        failed += usize::from(!ok);
        let mut detail = out.detail;
        if took > limit {
            detail = format!("{detail}; over the {}s limit", limit.as_secs());
        }
        println!(
            "{} criterion {n:>2} {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("{} of 18 criteria pass", 18 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
