use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::monomial::{DerivativeMultiset, Monomial};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over `field` in variables `x1..x{nvars}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: u32,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

/// Result of a homogeneity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Inhomogeneous,
}

impl Homogeneity {
    pub fn is_homogeneous(self) -> bool {
        !matches!(self, Homogeneity::Inhomogeneous)
    }

    pub fn degree(self) -> Option<u32> {
        match self {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }
}

impl Polynomial {
    pub fn zero(nvars: u32, field: Field) -> Polynomial {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: u32) -> Polynomial {
        Polynomial::monomial(Monomial::one(), c, nvars)
    }

    pub fn one(nvars: u32, field: Field) -> Polynomial {
        Polynomial::constant(Scalar::one(field), nvars)
    }

    pub fn var(i: u32, nvars: u32, field: Field) -> Polynomial {
        assert!(i >= 1 && i <= nvars, "variable x{i} outside 1..={nvars}");
        Polynomial::monomial(Monomial::var(i), Scalar::one(field), nvars)
    }

    pub fn monomial(m: Monomial, c: Scalar, nvars: u32) -> Polynomial {
        assert!(
            m.max_var() <= nvars,
            "monomial uses x{} beyond nvars {nvars}",
            m.max_var()
        );
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            nvars,
            field,
            terms,
        }
    }

    /// Sums the given terms; repeated monomials are merged.
    pub fn from_terms<I>(nvars: u32, field: Field, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Polynomial::zero(nvars, field);
        for (m, c) in terms {
            if m.max_var() > nvars {
                return Err(Error::VariableOutOfRange(m.max_var(), nvars));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    c.field().to_string(),
                ));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Largest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut it = self.terms.keys();
        match it.next() {
            None => Homogeneity::Zero,
            Some(m) => {
                let d = m.degree();
                if it.all(|m| m.degree() == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    /// `(true, Some(d))` for nonzero homogeneous, `(true, None)` for zero.
    pub fn is_homogeneous(&self) -> (bool, Option<u32>) {
        let h = self.homogeneity();
        (h.is_homogeneous(), h.degree())
    }

    fn check_compatible(&self, o: &Polynomial) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::Dimension(self.nvars, o.nvars));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                o.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.neg());
        }
        Ok(r)
    }

    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(o)?;
        let mut r = Polynomial::zero(self.nvars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars, self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.mul(c)))
            .collect();
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms,
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Result<Polynomial> {
        Ok(self.scale(&Scalar::from_rational(c, self.field)?))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), a.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(self.nvars, self.field);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Polynomial>>(
        nvars: u32,
        field: Field,
        it: I,
    ) -> Polynomial {
        it.into_iter()
            .fold(Polynomial::one(nvars, field), |acc, q| &acc * q)
    }

    /// Successive partial derivative `∂_X p` with falling-factorial coefficients.
    pub fn derivative(&self, x: &DerivativeMultiset) -> Result<Polynomial> {
        if x.0.max_var() > self.nvars {
            return Err(Error::VariableOutOfRange(x.0.max_var(), self.nvars));
        }
        let mut r = Polynomial::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            let Some(q) = m.div(&x.0) else { continue };
            let mut coef = c.clone();
            for &(i, k) in x.0.pairs() {
                let e = m.exponent(i);
                for j in 0..k {
                    coef = coef.mul_int((e - j) as u64);
                }
            }
            r.add_term(q, coef);
        }
        Ok(r)
    }

    /// Single-variable partial derivative.
    pub fn diff(&self, i: u32) -> Result<Polynomial> {
        self.derivative(&DerivativeMultiset(Monomial::var(i)))
    }

    /// Drops every term containing a variable flagged in `vars` (indexed by variable).
    pub fn set_zero(&self, vars: &[bool]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| !m.contains_any(vars))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms,
        }
    }

    /// Same polynomial viewed in a ring with `n` variables.
    pub fn with_nvars(&self, n: u32) -> Result<Polynomial> {
        if let Some(v) = self.terms.keys().map(Monomial::max_var).max() {
            if v > n {
                return Err(Error::VariableOutOfRange(v, n));
            }
        }
        Ok(Polynomial {
            nvars: n,
            field: self.field,
            terms: self.terms.clone(),
        })
    }

    /// Renames variables through `f` into a ring with `n` variables; `f` must be
    /// injective on the variables in use.
    pub fn rename_vars(&self, n: u32, f: impl Fn(u32) -> u32) -> Result<Polynomial> {
        let mut r = Polynomial::zero(n, self.field);
        for (m, c) in &self.terms {
            let m2 = m.map_vars(&f);
            if m2.max_var() > n {
                return Err(Error::VariableOutOfRange(m2.max_var(), n));
            }
            r.add_term(m2, c.clone());
        }
        Ok(r)
    }

    /// Re-expresses the coefficients in `field`.
    pub fn to_field(&self, field: Field) -> Result<Polynomial> {
        if field == self.field {
            return Ok(self.clone());
        }
        let mut r = Polynomial::zero(self.nvars, field);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), Scalar::from_rational(&c.to_rational(), field)?);
        }
        Ok(r)
    }

    /// Splits by the exponent of `x_y`, which must be at most 1:
    /// returns `(A, B)` with `self = A*x_y + B`.
    pub fn split_linear(&self, y: u32) -> Result<(Polynomial, Polynomial)> {
        let mut a = Polynomial::zero(self.nvars, self.field);
        let mut b = Polynomial::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            match m.exponent(y) {
                0 => b.add_term(m.clone(), c.clone()),
                1 => a.add_term(m.div(&Monomial::var(y)).expect("divisible"), c.clone()),
                e => {
                    return Err(Error::Precondition(format!(
                        "x{y} appears with exponent {e}"
                    )))
                }
            }
        }
        Ok((a, b))
    }

    pub fn apply_linear_map(&self, l: &LinearMap) -> Result<Polynomial> {
        let mut powers: HashMap<(u32, u32), Polynomial> = HashMap::new();
        let mut r = Polynomial::zero(l.n0, self.field);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(c.clone(), l.n0);
            for &(i, e) in m.pairs() {
                let img = l.images.get((i - 1) as usize).ok_or_else(|| {
                    Error::Precondition(format!("linear map has no image for x{i}"))
                })?;
                if img.field != self.field {
                    return Err(Error::FieldMismatch(
                        self.field.to_string(),
                        img.field.to_string(),
                    ));
                }
                let pw = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                acc = &acc * pw;
                if acc.is_zero() {
                    break;
                }
            }
            for (t, a) in acc.terms {
                r.add_term(t, a);
            }
        }
        Ok(r)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on incompatible operands; see [`Polynomial::try_add`].
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("incompatible polynomials")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_sub(o).expect("incompatible polynomials")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("incompatible polynomials")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&Scalar::from_int(-1, self.field))
    }
}

/// Linear substitution `x_i -> images[i-1]` into variables `z1..z{n0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    n0: u32,
    images: Vec<Polynomial>,
}

impl LinearMap {
    pub fn new(n0: u32, images: Vec<Polynomial>) -> Result<LinearMap> {
        for (j, img) in images.iter().enumerate() {
            if img.nvars != n0 {
                return Err(Error::Dimension(img.nvars, n0));
            }
            if !matches!(
                img.homogeneity(),
                Homogeneity::Zero | Homogeneity::Degree(1)
            ) {
                return Err(Error::Precondition(format!(
                    "image of x{} is not a linear form",
                    j + 1
                )));
            }
        }
        Ok(LinearMap { n0, images })
    }

    /// Integer coefficient matrix: `rows[i][j]` is the coefficient of `z_{j+1}` in `L(x_{i+1})`.
    pub fn from_int_matrix(n0: u32, rows: &[Vec<i64>], field: Field) -> Result<LinearMap> {
        let images = rows
            .iter()
            .map(|row| {
                Polynomial::from_terms(
                    n0,
                    field,
                    row.iter()
                        .enumerate()
                        .map(|(j, &c)| (Monomial::var(j as u32 + 1), Scalar::from_int(c, field))),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        LinearMap::new(n0, images)
    }

    /// `L(x_i) = z_{f(i)}` or `0` where `f` returns `None`.
    pub fn coordinate(n: u32, n0: u32, field: Field, f: impl Fn(u32) -> Option<u32>) -> LinearMap {
        let images = (1..=n)
            .map(|i| match f(i) {
                Some(j) => Polynomial::var(j, n0, field),
                None => Polynomial::zero(n0, field),
            })
            .collect();
        LinearMap { n0, images }
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn to_field(&self, field: Field) -> Result<LinearMap> {
        let images = self
            .images
            .iter()
            .map(|p| p.to_field(field))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMap {
            n0: self.n0,
            images,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: u32) -> Polynomial {
        super::super::text::parse_polynomial(s, Some(n), Field::Rational).unwrap()
    }

    #[test]
    fn add_mul_basics() {
        assert_eq!(&p("x1 + x2", 2) + &p("-x2", 2), p("x1", 2));
        assert_eq!(&p("2*x1^2", 2) + &p("3*x1^2", 2), p("5*x1^2", 2));
        assert_eq!(&p("x1+x2", 2) * &p("x1-x2", 2), p("x1^2 - x2^2", 2));
        assert!(p("x1", 2).try_add(&p("x1", 3)).is_err());
    }

    #[test]
    fn derivatives() {
        let f = p("x1^2*x2", 2);
        assert_eq!(f.diff(1).unwrap(), p("2*x1*x2", 2));
        let g = p("x1*x2*x3", 3);
        assert_eq!(
            g.derivative(&DerivativeMultiset::from_vars(&[1, 2]))
                .unwrap(),
            p("x3", 3)
        );
        let h = p("x1^3", 1);
        let direct = h
            .derivative(&DerivativeMultiset::from_vars(&[1, 1]))
            .unwrap();
        assert_eq!(direct, h.diff(1).unwrap().diff(1).unwrap());
        assert_eq!(direct, p("6*x1", 1));
        assert!(h.diff(2).is_err());
    }

    #[test]
    fn linear_map_substitution() {
        let l = LinearMap::coordinate(2, 1, Field::Rational, |_| Some(1));
        assert_eq!(p("x1*x2", 2).apply_linear_map(&l).unwrap(), p("x1^2", 1));
        let id = LinearMap::coordinate(3, 3, Field::Rational, Some);
        let f = p("3/2*x1^2*x3 - x2", 3);
        assert_eq!(f.apply_linear_map(&id).unwrap(), f);
        assert!(LinearMap::new(1, vec![p("x1^2", 1)]).is_err());
    }

    #[test]
    fn homogeneity() {
        assert_eq!(p("x1^2 + x1*x2", 2).is_homogeneous(), (true, Some(2)));
        assert!(!p("x1 + x1*x2", 2).is_homogeneous().0);
        assert_eq!(
            Polynomial::zero(2, Field::Rational).is_homogeneous(),
            (true, None)
        );
    }
}
