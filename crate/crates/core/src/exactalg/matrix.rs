use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{AlgebraError, Field, FieldScalar, Polynomial, Subspace};

/// A dense row-major matrix whose entries all live in one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<FieldScalar>) -> Result<Matrix, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.field() != field) {
            return Err(AlgebraError::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldScalar>>) -> Result<Matrix, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("rectangular integer literal")
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn diagonal_matrix(field: Field, entries: &[FieldScalar]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// A single column built from a vector.
    pub fn column(field: Field, v: &[FieldScalar]) -> Matrix {
        Matrix { field, rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldScalar) {
        assert_eq!(v.field(), self.field, "field mismatch in Matrix::set");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<FieldScalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.is_upper_triangular() && self.diagonal().iter().all(FieldScalar::is_zero)
    }

    pub fn is_unitriangular(&self) -> bool {
        self.is_upper_triangular() && self.diagonal().iter().all(FieldScalar::is_one)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { data, field: self.field, rows: self.rows, cols: self.cols })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { data, field: self.field, rows: self.rows, cols: self.cols })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                data.push(acc);
            }
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols: other.cols, data })
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Result<Vec<FieldScalar>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.checked_mul(&Matrix::column(self.field, v))?.data)
    }

    pub fn scale(&self, s: &FieldScalar) -> Matrix {
        Matrix { data: self.data.iter().map(|a| a * s).collect(), field: self.field, rows: self.rows, cols: self.cols }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Result<Matrix, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare(self.rows, self.cols));
        }
        let base = if e < 0 {
            self.inverse()?.ok_or(AlgebraError::DivisionByZero)?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Lie bracket `XY - YX`.
    pub fn bracket(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Null space `{ v : M v = 0 }` as a canonical subspace.
    pub fn kernel_basis(&self) -> Subspace {
        let Rref { matrix, rank, pivots } = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = -matrix.get(row, free);
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.field, self.cols, basis).expect("kernel vectors share the field")
    }

    /// One exact solution of `M w = c` with free variables set to zero.
    pub fn solve_linear(&self, c: &[FieldScalar]) -> Result<Option<Vec<FieldScalar>>, AlgebraError> {
        if c.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                c.len(),
                self.rows
            )));
        }
        if let Some(bad) = c.iter().find(|x| x.field() != self.field) {
            return Err(AlgebraError::FieldMismatch(self.field, bad.field()));
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            aug.data[i * (self.cols + 1) + self.cols] = c[i].clone();
        }
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut w = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            w[pc] = matrix.get(row, self.cols).clone();
        }
        Ok(Some(w))
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if self.is_upper_triangular() {
            return Ok(self.upper_triangular_inverse());
        }
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = self.field.one();
        }
        let Rref { matrix, rank, pivots } = aug.rref();
        if rank < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = matrix.get(i, n + j).clone();
            }
        }
        Ok(Some(inv))
    }

    /// Back substitution for upper-triangular matrices; this is the hot path
    /// for group elements.
    fn upper_triangular_inverse(&self) -> Option<Matrix> {
        let n = self.rows;
        let diag_inv: Vec<FieldScalar> = self.diagonal().iter().map(FieldScalar::inv).collect::<Option<_>>()?;
        let mut inv = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            inv.data[j * n + j] = diag_inv[j].clone();
            for i in (0..j).rev() {
                let mut acc = self.field.zero();
                for l in i + 1..=j {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * inv.get(l, j));
                }
                inv.data[i * n + j] = -(&acc * &diag_inv[i]);
            }
        }
        Some(inv)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<FieldScalar, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&factor * m.get(c, j));
                    m.data[i * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(xI - M)` by Berkowitz's division-free
    /// recursion.
    pub fn char_poly(&self) -> Result<Polynomial, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare(self.rows, self.cols));
        }
        let f = self.field;
        // Descending coefficients of the characteristic polynomial of the
        // leading r x r block.
        let mut coeffs = vec![f.one()];
        for r in 0..self.rows {
            let a = self.get(r, r);
            let row: Vec<FieldScalar> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<FieldScalar> = (0..r).map(|i| self.get(i, r).clone()).collect();
            // Toeplitz column: 1, -a, -R S, -R A S, ..., -R A^{r-1} S
            let mut toeplitz = vec![f.one(), -a];
            for _ in 0..r {
                let rs = row.iter().zip(&col).fold(f.zero(), |acc, (x, y)| &acc + &(x * y));
                toeplitz.push(-rs);
                col = (0..r)
                    .map(|i| (0..r).fold(f.zero(), |acc, l| &acc + &(self.get(i, l) * &col[l])))
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = f.zero();
                for (j, c) in coeffs.iter().enumerate() {
                    if i >= j {
                        acc = &acc + &(&toeplitz[i - j] * c);
                    }
                }
                next.push(acc);
            }
            coeffs = next;
        }
        coeffs.reverse();
        Ok(Polynomial::new(f, coeffs))
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<Matrix> for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
