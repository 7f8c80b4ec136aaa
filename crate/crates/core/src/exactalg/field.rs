use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// The coefficient field of a computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// Moduli are kept below 2^32 so residue products fit in a `u64`.
const MAX_MODULUS: u64 = 1 << 32;

impl Field {
    /// Builds the prime field of order `p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// 0 for the rationals, `p` for the prime field.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::zero()),
            Field::Prime(p) => FieldScalar::Prime { residue: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldScalar::Prime {
                residue: v.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let r = ((v % &m) + &m) % &m;
                FieldScalar::Prime {
                    residue: r.to_u64().expect("residue below modulus"),
                    modulus: *p,
                }
            }
        }
    }

    /// Maps `num / den` into the field. Fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<FieldScalar, AlgebraError> {
        let d = self.from_bigint(den);
        let inv = d.inv().ok_or(AlgebraError::DivisionByZero)?;
        Ok(&self.from_bigint(num) * &inv)
    }

    /// Parses `"7"`, `"-3"` or `"p/q"`.
    pub fn parse(&self, text: &str) -> Result<FieldScalar, AlgebraError> {
        let text = text.trim();
        let bad = || AlgebraError::Parse(format!("not an integer or p/q rational: {text:?}"));
        match text.split_once('/') {
            None => {
                let n: BigInt = text.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&n))
            }
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                self.from_fraction(&n, &d)
            }
        }
    }

    /// All field elements in residue order; `None` for the rationals.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldScalar>> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(move |r| FieldScalar::Prime { residue: r, modulus: p })),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar. Rationals are always in lowest terms with positive
/// denominator (maintained by `BigRational`); residues are reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Prime { residue, .. } => *residue == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(r.recip()),
            FieldScalar::Prime { residue, modulus } => FieldScalar::Prime {
                residue: mod_pow(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Integer power; negative exponents invert first. Panics on `0^-n`.
    pub fn pow(&self, e: i64) -> FieldScalar {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = self.field().one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    pub fn try_add(&self, rhs: &FieldScalar) -> Result<FieldScalar, AlgebraError> {
        self.binop(rhs, Op::Add)
    }

    pub fn try_sub(&self, rhs: &FieldScalar) -> Result<FieldScalar, AlgebraError> {
        self.binop(rhs, Op::Sub)
    }

    pub fn try_mul(&self, rhs: &FieldScalar) -> Result<FieldScalar, AlgebraError> {
        self.binop(rhs, Op::Mul)
    }

    pub fn try_div(&self, rhs: &FieldScalar) -> Result<FieldScalar, AlgebraError> {
        if rhs.field() != self.field() {
            return Err(AlgebraError::FieldMismatch(self.field(), rhs.field()));
        }
        let inv = rhs.inv().ok_or(AlgebraError::DivisionByZero)?;
        self.try_mul(&inv)
    }

    fn binop(&self, rhs: &FieldScalar, op: Op) -> Result<FieldScalar, AlgebraError> {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => Ok(FieldScalar::Rational(match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
            })),
            (
                FieldScalar::Prime { residue: a, modulus: p },
                FieldScalar::Prime { residue: b, modulus: q },
            ) if p == q => Ok(FieldScalar::Prime {
                residue: match op {
                    Op::Add => (a + b) % p,
                    Op::Sub => (a + p - b) % p,
                    Op::Mul => (a * b) % p,
                },
                modulus: *p,
            }),
            _ => Err(AlgebraError::FieldMismatch(self.field(), rhs.field())),
        }
    }

    /// The rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(r) => Some(r),
            FieldScalar::Prime { .. } => None,
        }
    }

    /// Total order used only for deterministic sorting: residues numerically,
    /// rationals by value.
    pub fn canonical_cmp(&self, other: &FieldScalar) -> Ordering {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => a.cmp(b),
            (FieldScalar::Prime { residue: a, .. }, FieldScalar::Prime { residue: b, .. }) => a.cmp(b),
            (FieldScalar::Rational(_), _) => Ordering::Less,
            (_, FieldScalar::Rational(_)) => Ordering::Greater,
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

pub(crate) fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(-r),
            FieldScalar::Prime { residue, modulus } => FieldScalar::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Sign of a rational scalar (`-1`, `0`, `1`); prime-field scalars report 1 unless zero.
pub fn signum(x: &FieldScalar) -> i32 {
    match x {
        FieldScalar::Rational(r) if r.is_negative() => -1,
        s if s.is_zero() => 0,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(5).is_ok());
        assert_eq!(Field::prime(6), Err(AlgebraError::NotPrime(6)));
        assert_eq!(Field::prime(1), Err(AlgebraError::NotPrime(1)));
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        let b = q.parse("3/2").unwrap();
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn residue_arithmetic() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(3).inv().unwrap(), f5.from_i64(2));
        assert_eq!(f5.from_i64(4).pow(3), f5.from_i64(4));
        assert_eq!(f5.from_i64(2).pow(-1), f5.from_i64(3));
        assert_eq!(f5.parse("1/2").unwrap(), f5.from_i64(3));
        assert_eq!(-f5.from_i64(1), f5.from_i64(4));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::prime(5).unwrap().one();
        let b = Field::prime(7).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(AlgebraError::FieldMismatch(..))));
        assert!(a.try_mul(&Field::Rational.one()).is_err());
    }

    #[test]
    fn zero_denominator_in_field_is_error() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("1/5"), Err(AlgebraError::DivisionByZero));
    }
}
