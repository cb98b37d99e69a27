//! Exact sparse polynomials, derivatives, substitutions and monomial counting.

mod combinatorics;
mod monomial;
mod polynomial;
mod scalar;
mod text;

pub use combinatorics::{
    binomial, binomial_signed, count_monomials, enumerate_monomials, enumerate_monomials_in,
    monomial_count_or_zero,
};
pub use monomial::{DerivativeMultiset, Monomial};
pub use polynomial::{Homogeneity, LinearMap, Polynomial};
pub use scalar::{parse_rational, Field, Scalar, DEFAULT_PRIME};
pub use text::{parse_polynomial, rational_string};

pub(crate) use scalar::invmod;

/// Free-function form of [`Polynomial::try_add`].
pub fn poly_add(a: &Polynomial, b: &Polynomial) -> crate::Result<Polynomial> {
    a.try_add(b)
}

/// Free-function form of [`Polynomial::try_mul`].
pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> crate::Result<Polynomial> {
    a.try_mul(b)
}

pub fn partial_derivative(p: &Polynomial, x: &DerivativeMultiset) -> crate::Result<Polynomial> {
    p.derivative(x)
}

pub fn apply_linear_map(p: &Polynomial, l: &LinearMap) -> crate::Result<Polynomial> {
    p.apply_linear_map(l)
}
