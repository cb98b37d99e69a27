//! Exact rank of spans of polynomials.
//!
//! Rows are kept sparse and in echelon form keyed by their leading column. Over
//! the rationals each row is cleared to a primitive integer vector and reduced
//! by cross-multiplication (fraction-free); over F_p rows are scaled to a unit
//! leading coefficient.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{invmod, Field, Monomial, Polynomial, Scalar};
use crate::error::{Error, Result};

type IntRow = Vec<(u32, BigInt)>;
type ModRow = Vec<(u32, u64)>;

#[derive(Clone, Debug)]
enum Rows {
    Int(Vec<IntRow>),
    Mod(Vec<ModRow>),
}

/// Incrementally maintained row space of polynomials.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    nvars: Option<u32>,
    cols: HashMap<Monomial, u32>,
    pivots: HashMap<u32, usize>,
    rows: Rows,
}

fn make_primitive(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
}

fn reduce_int(row: &IntRow, piv: &IntRow) -> IntRow {
    let a = &row[0].1;
    let b = &piv[0].1;
    let g = a.gcd(b);
    let ra = b / &g;
    let rb = a / &g;
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < piv.len() {
        if j == piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
            out.push((row[i].0, &row[i].1 * &ra));
            i += 1;
        } else if i == row.len() || piv[j].0 < row[i].0 {
            out.push((piv[j].0, -(&piv[j].1 * &rb)));
            j += 1;
        } else {
            let v = &row[i].1 * &ra - &piv[j].1 * &rb;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

fn normalize_mod(row: &mut ModRow, p: u64) {
    if let Some(&(_, lead)) = row.first() {
        if lead != 1 {
            let inv = invmod(lead, p).expect("nonzero lead");
            for (_, c) in row.iter_mut() {
                *c = ((*c as u128 * inv as u128) % p as u128) as u64;
            }
        }
    }
}

fn reduce_mod(row: &ModRow, piv: &ModRow, p: u64) -> ModRow {
    let a = row[0].1 as u128;
    let pp = p as u128;
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < piv.len() {
        if j == piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
            out.push(row[i]);
            i += 1;
        } else if i == row.len() || piv[j].0 < row[i].0 {
            let v = (pp - (a * piv[j].1 as u128) % pp) % pp;
            out.push((piv[j].0, v as u64));
            j += 1;
        } else {
            let v = (row[i].1 as u128 + pp - (a * piv[j].1 as u128) % pp) % pp;
            if v != 0 {
                out.push((row[i].0, v as u64));
            }
            i += 1;
            j += 1;
        }
    }
    normalize_mod(&mut out, p);
    out
}

impl RowSpace {
    pub fn new(field: Field) -> RowSpace {
        let rows = match field {
            Field::Rational => Rows::Int(Vec::new()),
            Field::Prime(_) => Rows::Mod(Vec::new()),
        };
        RowSpace {
            field,
            nvars: None,
            cols: HashMap::new(),
            pivots: HashMap::new(),
            rows,
        }
    }

    /// Fixes the column order ahead of time (the leading column of a row is its
    /// first column in this order).
    pub fn with_columns<'a, I: IntoIterator<Item = &'a Monomial>>(
        field: Field,
        cols: I,
    ) -> RowSpace {
        let mut rs = RowSpace::new(field);
        for m in cols {
            rs.column(m);
        }
        rs
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn column(&mut self, m: &Monomial) -> u32 {
        let next = self.cols.len() as u32;
        *self.cols.entry(m.clone()).or_insert(next)
    }

    fn check(&mut self, p: &Polynomial) -> Result<()> {
        if p.field() != self.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                p.field().to_string(),
            ));
        }
        match self.nvars {
            None => self.nvars = Some(p.nvars()),
            Some(n) if n != p.nvars() => return Err(Error::Dimension(n, p.nvars())),
            _ => {}
        }
        Ok(())
    }

    fn int_row(&mut self, p: &Polynomial) -> IntRow {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            if let Scalar::Rational(r) = c {
                den = den.lcm(r.denom());
            }
        }
        let mut row: IntRow = p
            .terms()
            .map(|(m, c)| {
                let Scalar::Rational(r) = c else {
                    unreachable!()
                };
                (self.column(m), r.numer() * (&den / r.denom()))
            })
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        make_primitive(&mut row);
        row
    }

    fn mod_row(&mut self, p: &Polynomial, q: u64) -> ModRow {
        let mut row: ModRow = p
            .terms()
            .map(|(m, c)| {
                let Scalar::Mod { value, .. } = c else {
                    unreachable!()
                };
                (self.column(m), *value)
            })
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        normalize_mod(&mut row, q);
        row
    }

    /// Reduces `p` against the current rows; inserts it when independent.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, p: &Polynomial) -> Result<bool> {
        self.reduce(p, true)
    }

    /// Whether `p` lies in the current span (the span is left unchanged).
    pub fn contains(&mut self, p: &Polynomial) -> Result<bool> {
        Ok(!self.reduce(p, false)?)
    }

    fn reduce(&mut self, p: &Polynomial, keep: bool) -> Result<bool> {
        self.check(p)?;
        if p.is_zero() {
            return Ok(false);
        }
        match self.field {
            Field::Rational => {
                let mut row = self.int_row(p);
                let Rows::Int(rows) = &mut self.rows else {
                    unreachable!()
                };
                while let Some(&(lead, _)) = row.first() {
                    match self.pivots.get(&lead) {
                        Some(&ix) => row = reduce_int(&row, &rows[ix]),
                        None => {
                            if keep {
                                self.pivots.insert(lead, rows.len());
                                rows.push(row);
                            }
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
            Field::Prime(q) => {
                let mut row = self.mod_row(p, q);
                let Rows::Mod(rows) = &mut self.rows else {
                    unreachable!()
                };
                while let Some(&(lead, _)) = row.first() {
                    match self.pivots.get(&lead) {
                        Some(&ix) => row = reduce_mod(&row, &rows[ix], q),
                        None => {
                            if keep {
                                self.pivots.insert(lead, rows.len());
                                rows.push(row);
                            }
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
        }
    }
}

/// Options for rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of terms in a generated polynomial family.
    pub terms: usize,
    /// Maximum `rows * columns` of a coefficient matrix.
    pub cells: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            terms: 1_000_000,
            cells: 100_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            terms: usize::MAX,
            cells: u128::MAX,
        }
    }

    pub fn with_cells(cells: u128) -> Budget {
        Budget {
            cells,
            ..Budget::default()
        }
    }

    pub fn check_cells(&self, rows: usize, cols: usize) -> Result<()> {
        let c = rows as u128 * cols as u128;
        if c > self.cells {
            return Err(Error::Budget(format!(
                "{rows}x{cols} matrix exceeds {} cells",
                self.cells
            )));
        }
        Ok(())
    }

    pub fn check_terms(&self, terms: usize) -> Result<()> {
        if terms > self.terms {
            return Err(Error::Budget(format!(
                "{terms} terms exceed cap {}",
                self.terms
            )));
        }
        Ok(())
    }
}

/// Rank of the coefficient matrix of `polys` (columns in graded-lex order).
pub fn span_rank(polys: &[Polynomial], budget: &Budget) -> Result<usize> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let field = first.field();
    let nvars = first.nvars();
    let mut maxdeg = 0;
    for p in polys {
        if p.field() != field {
            return Err(Error::FieldMismatch(
                field.to_string(),
                p.field().to_string(),
            ));
        }
        if p.nvars() != nvars {
            return Err(Error::Dimension(nvars, p.nvars()));
        }
        maxdeg = maxdeg.max(p.degree().unwrap_or(0));
    }
    check_prime_vs_degree(field, maxdeg)?;
    let mut cols: Vec<&Monomial> = polys.iter().flat_map(|p| p.monomials()).collect();
    cols.sort_unstable();
    cols.dedup();
    budget.check_cells(polys.len(), cols.len())?;
    let mut rs = RowSpace::with_columns(field, cols);
    for p in polys {
        rs.insert(p)?;
    }
    Ok(rs.rank())
}

/// Derivative coefficients are falling factorials, so prime mode needs `p > degree`.
pub fn check_prime_vs_degree(field: Field, degree: u32) -> Result<()> {
    if let Field::Prime(p) = field {
        if p <= degree as u64 {
            return Err(Error::Precondition(format!(
                "prime {p} must exceed the polynomial degree {degree}"
            )));
        }
    }
    Ok(())
}

/// Rank of a dense integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Dense Bareiss rank of rational polynomials, used as an independent check.
pub fn dense_rank(polys: &[Polynomial]) -> usize {
    let mut cols: Vec<&Monomial> = polys.iter().flat_map(|p| p.monomials()).collect();
    cols.sort_unstable();
    cols.dedup();
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mat = polys
        .iter()
        .map(|p| {
            let mut den = BigInt::one();
            for (_, c) in p.terms() {
                den = den.lcm(c.to_rational().denom());
            }
            let mut row = vec![BigInt::zero(); cols.len()];
            for (m, c) in p.terms() {
                let r = c.to_rational();
                row[index[m]] = r.numer() * (&den / r.denom());
            }
            row
        })
        .collect();
    bareiss_rank(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    fn polys(v: &[&str], n: u32, f: Field) -> Vec<Polynomial> {
        v.iter()
            .map(|s| parse_polynomial(s, Some(n), f).unwrap())
            .collect()
    }

    #[test]
    fn tiny_ranks() {
        let b = Budget::default();
        assert_eq!(
            span_rank(&polys(&["x1", "x2", "x1+x2"], 2, Field::Rational), &b).unwrap(),
            2
        );
        assert_eq!(span_rank(&[], &b).unwrap(), 0);
        assert_eq!(
            span_rank(&polys(&["0"], 2, Field::Rational), &b).unwrap(),
            0
        );
        assert_eq!(
            span_rank(&polys(&["x1", "x2", "x1+x2"], 2, Field::Prime(5)), &b).unwrap(),
            2
        );
    }

    #[test]
    fn characteristic_matters() {
        let v = ["x1 + x2", "x1 - x2"];
        assert_eq!(
            span_rank(&polys(&v, 2, Field::Rational), &Budget::default()).unwrap(),
            2
        );
        assert_eq!(dense_rank(&polys(&v, 2, Field::Rational)), 2);
        let mut rs = RowSpace::new(Field::Prime(2));
        for p in polys(&v, 2, Field::Prime(2)) {
            rs.insert(&p).unwrap();
        }
        assert_eq!(rs.rank(), 1);
    }

    #[test]
    fn containment_probe() {
        let mut rs = RowSpace::new(Field::Rational);
        for p in polys(&["x1*x2 + x3^2", "x2^2"], 3, Field::Rational) {
            rs.insert(&p).unwrap();
        }
        let inside =
            parse_polynomial("2*x1*x2 + 2*x3^2 - 5*x2^2", Some(3), Field::Rational).unwrap();
        let outside = parse_polynomial("x1*x2", Some(3), Field::Rational).unwrap();
        assert!(rs.contains(&inside).unwrap());
        assert!(!rs.contains(&outside).unwrap());
        assert_eq!(rs.rank(), 2);
    }

    #[test]
    fn bareiss_matches_known() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)],
        ];
        assert_eq!(bareiss_rank(m), 2);
    }
}
