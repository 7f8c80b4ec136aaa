use std::fmt;

use super::{AlgebraError, Field, FieldScalar};

/// Univariate polynomial with coefficients in ascending degree order.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldScalar>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<FieldScalar>) -> Polynomial {
        assert!(coeffs.iter().all(|c| c.field() == field), "polynomial coefficients must share the field");
        while coeffs.last().is_some_and(FieldScalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Polynomial {
        Polynomial::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Polynomial {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Polynomial {
        Polynomial { field, coeffs: vec![field.one()] }
    }

    /// `1 + x + ... + x^(k-1)`, whose roots are the nontrivial k-th roots of
    /// unity whenever k is invertible in the field.
    pub fn geometric(field: Field, k: u64) -> Polynomial {
        Polynomial::new(field, (0..k).map(|_| field.one()).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&FieldScalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &FieldScalar) -> FieldScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                Polynomial::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
            .collect();
        Ok(Polynomial::new(self.field, coeffs))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.field));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Polynomial::new(self.field, out))
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        self.check(divisor)?;
        let lc_inv = divisor.leading().ok_or(AlgebraError::DivisionByZero)?.inv().expect("nonzero");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * d);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(self.field, quot), Polynomial::new(self.field, rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.is_one() && i > 0 { String::new() } else { c.to_string() };
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{coeff}x")?,
                _ => write!(f, "{coeff}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let p = Polynomial::from_i64(f5(), &[3, 4, 1]);
        let q = Polynomial::from_i64(f5(), &[-1, 0, 1]);
        assert_eq!(p.gcd(&q).unwrap(), Polynomial::from_i64(f5(), &[1, 1]));
        let z = Polynomial::zero(f5());
        let p2 = Polynomial::from_i64(f5(), &[1, 2, 2]);
        assert_eq!(p2.gcd(&z).unwrap(), p2.monic());
        let x = Polynomial::from_i64(Field::Rational, &[0, 1]);
        let x1 = Polynomial::from_i64(Field::Rational, &[1, 1]);
        assert_eq!(x.gcd(&x1).unwrap(), Polynomial::one(Field::Rational));
    }

    #[test]
    fn division_identity() {
        let a = Polynomial::from_i64(Field::Rational, &[5, -3, 0, 2, 7]);
        let b = Polynomial::from_i64(Field::Rational, &[1, 0, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        let back = q.mul(&b).unwrap();
        assert_eq!(a.sub(&back).unwrap(), r);
    }

    #[test]
    fn display_and_eval() {
        let p = Polynomial::from_i64(f5(), &[3, 4, 1]);
        assert_eq!(p.to_string(), "x^2 + 4x + 3");
        assert!(p.eval(&f5().from_i64(4)).is_zero());
        assert!(p.eval(&f5().from_i64(2)).is_zero());
        assert!(!p.eval(&f5().from_i64(1)).is_zero());
        assert_eq!(Polynomial::geometric(f5(), 1), Polynomial::one(f5()));
    }
}
