use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use shpart::algebra::{count_monomials, parse_polynomial, DerivativeMultiset, Field};
use shpart::decompose::{low_depth_decompose, low_depth_k, upt_log_product_decompose};
use shpart::formula::{caterpillar, deg_seq, upt_k, FormulaBuilder};
use shpart::hardpolys::{
    construct_unbiased_word, imm_polynomial, largest_prime_in, monomial_and_vandermonde,
    nw_count_identities, nw_polynomial, nw_polynomial_wrapping, power_of_quadratic,
};
use shpart::measures::{
    app_sampled, app_with_map, pd_measure, residue, residue_bruteforce, sp_measure, Budget,
    MeasureConfig,
};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn poly(s: &str, n: u32) -> shpart::algebra::Polynomial {
    parse_polynomial(s, Some(n), Field::Rational).unwrap()
}

#[test]
fn repeated_derivative() {
    let p = poly("x1^3", 1);
    let d = p
        .derivative(&DerivativeMultiset::from_vars(&[1, 1]))
        .unwrap();
    assert_eq!(d, poly("6*x1", 1));
}

#[test]
fn monomial_counts() {
    assert_eq!(count_monomials(5, 3).unwrap(), BigUint::from(35u32));
    assert_eq!(count_monomials(3, 2).unwrap(), BigUint::from(6u32));
}

#[test]
fn small_residues() {
    assert_eq!(residue(1, &[1, 1]).unwrap().value, q(1, 2));
    assert_eq!(residue(1, &[2, 3]).unwrap().value, q(2, 5));
    assert_eq!(residue(2, &[2, 2]).unwrap().value, q(0, 1));
    assert_eq!(residue_bruteforce(1, &[1, 1], 3).unwrap().value, q(1, 2));
    for t in 1..=8u64 {
        let ones = vec![1; t as usize];
        if t % 2 == 0 {
            assert_eq!(residue(t / 2, &ones).unwrap().value, q(t as i64, 4));
        }
    }
}

#[test]
fn measures_of_monomials() {
    let cfg = MeasureConfig::default();
    assert_eq!(
        sp_measure(&poly("x1*x2*x3", 3), 1, 0, &cfg)
            .unwrap()
            .dimension,
        3
    );
    assert_eq!(
        sp_measure(&poly("x1*x2", 2), 1, 1, &cfg).unwrap().dimension,
        3
    );
    assert_eq!(
        pd_measure(&poly("x1*x2*x3*x4*x5", 5), 2, &cfg)
            .unwrap()
            .dimension,
        10
    );

    let (p, l) = monomial_and_vandermonde(5, 3, Field::Rational).unwrap();
    assert_eq!(app_with_map(&p, 2, &l, &cfg).unwrap().dimension, 10);
    assert_eq!(app_sampled(&p, 2, 3, 8, 42, &cfg).unwrap().dimension, 10);
}

#[test]
fn nw_examples() {
    let b = Budget::default();
    let cfg = MeasureConfig::default();
    assert_eq!(
        nw_polynomial(3, 3, 1, Field::Rational, &b)
            .unwrap()
            .num_terms(),
        3
    );
    assert_eq!(
        nw_polynomial(3, 3, 2, Field::Rational, &b)
            .unwrap()
            .num_terms(),
        9
    );
    assert!(nw_polynomial(3, 4, 1, Field::Rational, &b).is_err());
    // with points taken mod q the d = 4, q = 3 instance still has 4·3 first partials
    let p = nw_polynomial_wrapping(3, 4, 1, Field::Rational, &b).unwrap();
    assert_eq!(pd_measure(&p, 1, &cfg).unwrap().dimension, 12);
    let r = nw_count_identities(2, 3, 1, 1, true).unwrap();
    assert_eq!(r.sum_t_h, BigUint::from(12u32));
}

#[test]
fn families() {
    let b = Budget::default();
    let cfg = MeasureConfig::default();
    assert_eq!(
        imm_polynomial(1, 3, Field::Rational, &b)
            .unwrap()
            .to_string(),
        "x1*x2*x3"
    );
    assert_eq!(
        imm_polynomial(2, 2, Field::Rational, &b)
            .unwrap()
            .num_terms(),
        2
    );
    assert_eq!(
        power_of_quadratic(2, 1, Field::Rational, &b).unwrap(),
        poly("x1^2 + x2^2", 2)
    );
    let sq = power_of_quadratic(3, 2, Field::Rational, &b).unwrap();
    assert_eq!(pd_measure(&sq, 1, &cfg).unwrap().dimension, 3);
    assert_eq!(largest_prime_in(8, 16), Some(13));
    assert_eq!(largest_prime_in(2, 2), Some(2));
    assert_eq!(largest_prime_in(24, 28), None);

    let w = construct_unbiased_word(2, 4, 2).unwrap();
    assert_eq!(w.weights(), &[-2, 2, -2, 2]);
    assert_eq!(w.prefix_sums(), vec![-2, 0, -2, 0]);
    assert_eq!(w.n(), 16);
}

#[test]
fn parameter_pipelines() {
    let p = low_depth_k(16, 2);
    assert_eq!((p.tau, p.alpha.clone(), p.k), (4, q(3, 4), 6));
    let p = low_depth_k(9, 1);
    assert_eq!((p.tau, p.alpha.clone(), p.k), (9, q(1, 1), 4));

    let three = upt_k(&deg_seq(&caterpillar(3)).unwrap()).unwrap();
    assert_eq!((three.m, three.k), (0, 0));
    let ds = deg_seq(&caterpillar(3)).unwrap();
    assert_eq!(ds.degrees, vec![1, 1, 1]);
    assert_eq!(ds.suffixes, vec![3, 2, 1, 0]);
    let big = upt_k(&deg_seq(&caterpillar(81)).unwrap()).unwrap();
    assert_eq!((big.m, big.k, big.a.clone()), (1, 3, vec![1]));
}

#[test]
fn decompositions() {
    // x1·x2·x3 as a chain of products
    let mut b = FormulaBuilder::new();
    let (x1, x2, x3) = (b.input(1), b.input(2), b.input(3));
    let m = b.mul(&[x1, x2]);
    let root = b.mul(&[m, x3]);
    let f = b.build(root, 3).unwrap();
    let dec = upt_log_product_decompose(&f).unwrap();
    assert_eq!(dec.s(), 1);
    assert_eq!(dec.degrees(0), vec![1, 1, 1]);
    assert_eq!(dec.recombine(), f.eval());

    // x1·x2 + x3·x4: two products, each split into its linear factors
    let mut b = FormulaBuilder::new();
    let (x1, x2, x3, x4) = (b.input(1), b.input(2), b.input(3), b.input(4));
    let (m1, m2) = (b.mul(&[x1, x2]), b.mul(&[x3, x4]));
    let root = b.add(&[m1, m2]);
    let f = b.build(root, 4).unwrap();
    let dec = low_depth_decompose(&f, 2).unwrap();
    assert_eq!(dec.s(), 2);
    assert_eq!(dec.recombine(), poly("x1*x2 + x3*x4", 4));
}
