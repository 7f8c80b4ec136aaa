use super::{AlgebraError, Field, FieldScalar, Matrix};

/// A linear subspace of `F^ambient` stored by its reduced echelon basis.
///
/// The basis is canonical, so two subspaces are equal exactly when their
/// stored data is equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<FieldScalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(field: Field, ambient: usize, vectors: Vec<Vec<FieldScalar>>) -> Result<Subspace, AlgebraError> {
        if vectors.is_empty() {
            return Ok(Subspace::zero(field, ambient));
        }
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(AlgebraError::DimensionMismatch("spanning vector has wrong length".into()));
        }
        let m = Matrix::from_rows(field, vectors)?;
        let r = m.rref();
        let basis = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        Ok(Subspace { field, ambient, basis, pivots: r.pivots })
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        let id = Matrix::identity(field, ambient);
        Subspace { field, ambient, basis: id.row_vecs(), pivots: (0..ambient).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<FieldScalar>> {
        self.basis.clone()
    }

    pub fn basis(&self) -> &[Vec<FieldScalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` lies outside.
    pub fn coordinates(&self, v: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vec<FieldScalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.combine(&coords) == v).then_some(coords)
    }

    /// `sum_i c_i b_i` over the stored basis.
    pub fn combine(&self, coords: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o = &*o + &(c * x);
            }
        }
        out
    }

    pub fn contains(&self, v: &[FieldScalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        if self.ambient != other.ambient {
            return Err(AlgebraError::DimensionMismatch("subspaces in different ambient spaces".into()));
        }
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.field, self.ambient, vs)
    }

    /// Column space of a matrix, as a subspace of `F^rows`.
    pub fn image_of(m: &Matrix) -> Subspace {
        Subspace::from_spanning(m.field(), m.rows(), m.transpose().row_vecs()).expect("columns share the field")
    }

    /// A matrix `C` whose kernel is exactly this subspace.
    pub fn equations(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::identity(self.field, self.ambient);
        }
        let b = Matrix::from_rows(self.field, self.basis.clone()).expect("basis rows are rectangular");
        let ann = b.kernel_basis();
        if ann.is_zero() {
            return Matrix::zeros(self.field, 1, self.ambient);
        }
        Matrix::from_rows(self.field, ann.basis).expect("annihilator rows are rectangular")
    }
}
