use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// 2^61 - 1.
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_693_951;

/// Coefficient field of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !crate::hardpolys::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Field::Rational)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `rational`, `prime` (the default 61-bit prime) or `prime:<p>`.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rational" {
            return Ok(Field::Rational);
        }
        if s == "prime" {
            return Ok(Field::Prime(DEFAULT_PRIME));
        }
        if let Some(rest) = s.strip_prefix("prime:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime `{rest}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("unknown field `{s}`")))
    }
}

/// Exact field element. Arithmetic between elements of different fields panics;
/// `Polynomial` checks fields before combining.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, modulus: u64 },
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod {
                value: 0,
                modulus: p,
            },
        }
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_int(1, field)
    }

    pub fn from_int(v: i64, field: Field) -> Scalar {
        Scalar::from_bigint(&BigInt::from(v), field)
    }

    pub fn from_bigint(v: &BigInt, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Mod {
                value: bigint_mod(v, p),
                modulus: p,
            },
        }
    }

    /// Maps a rational into `field`; fails when the denominator vanishes mod p.
    pub fn from_rational(v: &BigRational, field: Field) -> Result<Scalar> {
        match field {
            Field::Rational => Ok(Scalar::Rational(v.clone())),
            Field::Prime(p) => {
                let num = bigint_mod(v.numer(), p);
                let den = bigint_mod(v.denom(), p);
                let inv = invmod(den, p).ok_or_else(|| {
                    Error::Domain(format!("denominator of {v} is divisible by {p}"))
                })?;
                Ok(Scalar::Mod {
                    value: mulmod(num, inv, p),
                    modulus: p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Rational value; prime-field elements lift to their representative in [0, p).
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Rational(r) => r.clone(),
            Scalar::Mod { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Mod {
                    value: a,
                    modulus: p,
                },
                Scalar::Mod {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Mod {
                value: addmod(*a, *b, *p),
                modulus: *p,
            },
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Mod {
                    value: a,
                    modulus: p,
                },
                Scalar::Mod {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Mod {
                value: mulmod(*a, *b, *p),
                modulus: *p,
            },
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn mul_int(&self, k: u64) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * BigRational::from_integer(BigInt::from(k))),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mulmod(*value, k % modulus, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(a.recip()))
                }
            }
            Scalar::Mod { value, modulus } => invmod(*value, *modulus).map(|v| Scalar::Mod {
                value: v,
                modulus: *modulus,
            }),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(num_traits::pow(a.clone(), e as usize)),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: powmod(*value, e as u64, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.abs()),
            m => m.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Parses `a` or `a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
