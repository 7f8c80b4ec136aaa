//! Truncated exponential and logarithm for nilpotent / unipotent matrices.

use crate::exactalg::{Field, FieldScalar, Matrix};

use super::GroupError;

fn check_characteristic(field: Field, n: usize, what: &str) -> Result<(), GroupError> {
    let p = field.characteristic();
    if p != 0 && p <= n as u64 {
        return Err(GroupError::UnsupportedCharacteristic { characteristic: p, dim: n, what: what.to_string() });
    }
    Ok(())
}

/// `exp(X) = sum_{m < n} X^m / m!` for strictly upper-triangular `X`.
pub fn exp_nilpotent(x: &Matrix) -> Result<Matrix, GroupError> {
    if !x.is_square() || !x.is_strictly_upper_triangular() {
        return Err(GroupError::NotStrictlyUpperTriangular);
    }
    let n = x.rows();
    let field = x.field();
    check_characteristic(field, n, "exp")?;
    let mut acc = Matrix::identity(field, n);
    let mut term = Matrix::identity(field, n);
    for m in 1..n {
        let inv_m = field.from_i64(m as i64).inv().expect("m invertible when p > n");
        term = (&term * x).scale(&inv_m);
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `log(u) = sum_{m < n} (-1)^{m+1} (u - I)^m / m` for unitriangular `u`.
pub fn log_unipotent(u: &Matrix) -> Result<Matrix, GroupError> {
    if !u.is_square() || !u.is_unitriangular() {
        return Err(GroupError::NotUnipotent);
    }
    let n = u.rows();
    let field = u.field();
    check_characteristic(field, n, "log")?;
    let nil = u - &Matrix::identity(field, n);
    let mut acc = Matrix::zeros(field, n, n);
    let mut power = Matrix::identity(field, n);
    for m in 1..n {
        power = &power * &nil;
        if power.is_zero() {
            break;
        }
        let mut c: FieldScalar = field.from_i64(m as i64).inv().expect("m invertible when p > n");
        if m % 2 == 0 {
            c = -c;
        }
        acc = &acc + &power.scale(&c);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_jordan_sum() {
        let q = Field::Rational;
        let x = Matrix::from_i64(q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = exp_nilpotent(&x).unwrap();
        let expected = Matrix::from_rows(
            q,
            vec![
                vec![q.one(), q.one(), q.parse("1/2").unwrap()],
                vec![q.zero(), q.one(), q.one()],
                vec![q.zero(), q.zero(), q.one()],
            ],
        )
        .unwrap();
        assert_eq!(e, expected);
        assert_eq!(log_unipotent(&e).unwrap(), x);
        assert_eq!(exp_nilpotent(&Matrix::zeros(q, 3, 3)).unwrap(), Matrix::identity(q, 3));
    }

    #[test]
    fn small_characteristic_rejected() {
        let f3 = Field::prime(3).unwrap();
        let x = Matrix::from_i64(f3, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(matches!(exp_nilpotent(&x), Err(GroupError::UnsupportedCharacteristic { .. })));
        let f5 = Field::prime(5).unwrap();
        let x5 = Matrix::from_i64(f5, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = exp_nilpotent(&x5).unwrap();
        assert_eq!(log_unipotent(&e).unwrap(), x5);
    }

    #[test]
    fn domain_checks() {
        let q = Field::Rational;
        assert!(exp_nilpotent(&Matrix::identity(q, 2)).is_err());
        assert!(log_unipotent(&Matrix::zeros(q, 2, 2)).is_err());
    }
}
