use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// All integer solutions of `M z = c`: `particular + span_Z(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer matrix");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "integer matrix dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * other.get(l, j);
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "integer vector length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square integer matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + factor * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + factor * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// Smith normal form. The pivot at each stage is the entry of smallest
    /// nonzero absolute value in the trailing block, ties broken row-major.
    pub fn smith_normal_form(&self) -> SmithDecomposition {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = IntMatrix::identity(m);
        let mut v = IntMatrix::identity(n);

        for t in 0..m.min(n) {
            let Some((pi, pj)) = a.smallest_nonzero(t) else {
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = -a.get(i, t).div_floor(a.get(t, t));
                    a.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= a.get(i, t).is_zero();
                }
                for j in t + 1..n {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = -a.get(t, j).div_floor(a.get(t, t));
                    a.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= a.get(t, j).is_zero();
                }
                if !clean {
                    let (pi, pj) = a.smallest_nonzero(t).expect("a remainder is nonzero");
                    a.swap_rows(t, pi);
                    u.swap_rows(t, pi);
                    a.swap_cols(t, pj);
                    v.swap_cols(t, pj);
                    continue;
                }
                let pivot = a.get(t, t).clone();
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => {
                        let one = BigInt::one();
                        a.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if a.get(t, t).is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
        }
        SmithDecomposition { u, d: a, v }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Every integer solution of `M z = c`, or `None` when there is none.
    pub fn solve_integer_system(&self, c: &[BigInt]) -> Option<IntegerSolution> {
        assert_eq!(c.len(), self.rows, "right-hand side length mismatch");
        let SmithDecomposition { u, d, v } = self.smith_normal_form();
        let c2 = u.mul_vec(c);
        let rank = (0..self.rows.min(self.cols)).take_while(|&i| !d.get(i, i).is_zero()).count();
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            if i < rank {
                let (q, r) = c2[i].div_rem(d.get(i, i));
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c2[i].is_zero() {
                return None;
            }
        }
        Some(IntegerSolution {
            particular: v.mul_vec(&y),
            kernel: (rank..self.cols).map(|j| v.column(j)).collect(),
        })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl SmithDecomposition {
    /// Diagonal entries `d_0, d_1, ...` of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let s = m.smith_normal_form();
        assert_eq!(s.invariant_factors(), big(&[2, 4]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        let id = IntMatrix::identity(3);
        assert_eq!(id.smith_normal_form().d, id);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(z.smith_normal_form().d, z);
    }

    #[test]
    fn integer_systems() {
        // b^2 = 360 over <6, 10>: rows for the primes 2, 3, 5
        let m = IntMatrix::from_i64(&[&[2, 2], &[2, 0], &[0, 2]]);
        assert_eq!(m.solve_integer_system(&big(&[3, 2, 1])), None);
        let id = IntMatrix::identity(3);
        let sol = id.solve_integer_system(&big(&[4, -1, 7])).unwrap();
        assert_eq!(sol.particular, big(&[4, -1, 7]));
        assert!(sol.kernel.is_empty());
        // b^2 = 36 over <6>
        let m = IntMatrix::from_i64(&[&[2], &[2]]);
        let sol = m.solve_integer_system(&big(&[2, 2])).unwrap();
        assert_eq!(sol.particular, big(&[1]));
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(IntMatrix::from_i64(&[&[2, 4], &[6, 8]]).det(), BigInt::from(-8));
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).det(), BigInt::from(-3));
    }
}
