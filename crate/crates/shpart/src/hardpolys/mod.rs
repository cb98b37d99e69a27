//! Explicit polynomial families: word polynomials, Nisan–Wigderson designs, IMM,
//! `P_σ`, the monomial with its Vandermonde projection, and powers of a quadratic.

mod families;
mod nw;
mod word;

pub use families::{
    imm_polynomial, imm_variable, monomial_and_vandermonde, p_sigma, power_of_quadratic, PSigma,
};
pub use nw::{
    nw_count_identities, nw_polynomial, nw_polynomial_wrapping, nw_variable, NwCountReport,
};
pub use word::{
    construct_unbiased_word, word_params, word_polynomial, word_sp_generators, word_sp_lower_bound,
    VarSet, Word, WordBuildParams,
};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_wide(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin; the first twelve prime bases suffice for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = powmod_wide(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Largest prime in `[lo, hi]`.
pub fn largest_prime_in(lo: u64, hi: u64) -> Option<u64> {
    if lo > hi {
        return None;
    }
    (lo..=hi).rev().find(|&p| is_prime(p))
}
