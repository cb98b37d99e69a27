use std::cmp::Ordering;
use std::fmt;

/// Monic monomial stored as sorted `(variable, exponent)` pairs with 1-based
/// variable indices and positive exponents.
///
/// Ordering is graded: lower degree first; within a degree the monomial with the
/// larger exponent on the first differing variable comes first, so the degree-2
/// monomials in two variables are ordered `x1^2 < x1*x2 < x2^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(i: u32) -> Monomial {
        assert!(i >= 1, "variables are 1-based");
        Monomial {
            exps: vec![(i, 1)],
            degree: 1,
        }
    }

    pub fn var_pow(i: u32, e: u32) -> Monomial {
        assert!(i >= 1, "variables are 1-based");
        if e == 0 {
            Monomial::one()
        } else {
            Monomial {
                exps: vec![(i, e)],
                degree: e,
            }
        }
    }

    /// Builds from arbitrary pairs; repeated variables are merged, zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Monomial {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut exps: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            assert!(i >= 1, "variables are 1-based");
            match exps.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => exps.push((i, e)),
            }
        }
        let degree = exps.iter().map(|p| p.1).sum();
        Monomial { exps, degree }
    }

    /// `dense[j]` is the exponent of `x_{j+1}`.
    pub fn from_dense(dense: &[u32]) -> Monomial {
        Monomial::from_pairs(dense.iter().enumerate().map(|(j, &e)| (j as u32 + 1, e)))
    }

    pub fn to_dense(&self, n: u32) -> Vec<u32> {
        let mut v = vec![0; n as usize];
        for &(i, e) in &self.exps {
            v[(i - 1) as usize] = e;
        }
        v
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn exponent(&self, i: u32) -> u32 {
        match self.exps.binary_search_by_key(&i, |p| p.0) {
            Ok(j) => self.exps[j].1,
            Err(_) => 0,
        }
    }

    pub fn max_var(&self) -> u32 {
        self.exps.last().map_or(0, |p| p.0)
    }

    pub fn contains_any(&self, vars: &[bool]) -> bool {
        self.exps
            .iter()
            .any(|&(i, _)| vars.get(i as usize).copied().unwrap_or(false))
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + o.exps.len());
        let (mut a, mut b) = (0, 0);
        while a < self.exps.len() && b < o.exps.len() {
            let (x, y) = (self.exps[a], o.exps[b]);
            match x.0.cmp(&y.0) {
                Ordering::Less => {
                    exps.push(x);
                    a += 1;
                }
                Ordering::Greater => {
                    exps.push(y);
                    b += 1;
                }
                Ordering::Equal => {
                    exps.push((x.0, x.1 + y.1));
                    a += 1;
                    b += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[a..]);
        exps.extend_from_slice(&o.exps[b..]);
        Monomial {
            exps,
            degree: self.degree + o.degree,
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.exps.iter().all(|&(i, e)| o.exponent(i) >= e)
    }

    /// `self / o`, or `None` when `o` does not divide `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut b = 0;
        for &(i, e) in &self.exps {
            let mut f = 0;
            if b < o.exps.len() && o.exps[b].0 == i {
                f = o.exps[b].1;
                b += 1;
            } else if b < o.exps.len() && o.exps[b].0 < i {
                return None;
            }
            if f > e {
                return None;
            }
            if e > f {
                exps.push((i, e - f));
            }
        }
        if b < o.exps.len() {
            return None;
        }
        Some(Monomial {
            exps,
            degree: self.degree - o.degree,
        })
    }

    /// Renames variables through `f`; `f` must be injective on the support.
    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(i, e)| (f(i), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Monomial) -> Ordering {
        self.degree.cmp(&o.degree).then_with(|| {
            for (x, y) in self.exps.iter().zip(o.exps.iter()) {
                if x.0 != y.0 {
                    // the monomial using the smaller variable has the larger exponent there
                    return x.0.cmp(&y.0);
                }
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
            }
            // equal degree and one support is a prefix: both must be identical
            self.exps.len().cmp(&o.exps.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Monomial) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (j, &(i, e)) in self.exps.iter().enumerate() {
            if j > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multiset of variables to differentiate by.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivativeMultiset(pub Monomial);

impl DerivativeMultiset {
    pub fn order(&self) -> u32 {
        self.0.degree()
    }

    pub fn from_vars(vars: &[u32]) -> DerivativeMultiset {
        DerivativeMultiset(Monomial::from_pairs(vars.iter().map(|&i| (i, 1))))
    }
}

impl From<Monomial> for DerivativeMultiset {
    fn from(m: Monomial) -> Self {
        DerivativeMultiset(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_lex() {
        let a = Monomial::from_dense(&[2, 0]);
        let b = Monomial::from_dense(&[1, 1]);
        let c = Monomial::from_dense(&[0, 2]);
        let x = Monomial::from_dense(&[0, 1]);
        assert!(a < b && b < c);
        assert!(x < a);
        let p = Monomial::from_dense(&[1, 0, 1]);
        let q = Monomial::from_dense(&[0, 2, 0]);
        assert!(p < q);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Monomial::from_dense(&[1, 0, 2]);
        let b = Monomial::from_dense(&[0, 3, 1]);
        let c = a.mul(&b);
        assert_eq!(c, Monomial::from_dense(&[1, 3, 3]));
        assert_eq!(c.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert!(b.divides(&c));
        assert_eq!(Monomial::from_dense(&[0, 1]).div(&Monomial::var(1)), None);
    }
}
