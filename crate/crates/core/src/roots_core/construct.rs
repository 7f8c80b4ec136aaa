use crate::exactalg::{FieldScalar, Matrix, Subspace};
use crate::group_ctx::{inv, DiagClass};

use super::{theta_from_action, RootEngine, RootError};

/// Where a layer-by-layer descent towards a k-th root ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Descent {
    Root(Matrix),
    /// The defect at `layer` is outside `Im θ`. `forced` is true when every
    /// earlier correction was unique, so no other root of this class exists.
    Blocked { layer: usize, forced: bool },
}

/// Subspaces bounding what roots over a mismatched class can reach on a layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionSubspace {
    pub layer: usize,
    pub b: DiagClass,
    pub image_theta: Subspace,
    /// `Im(σ_j(a) - I)`.
    pub image_a_minus_i: Subspace,
    /// Preimage of the vectors of `layer / Im(σ_j(a) - I)` fixed by `b`.
    pub fixed_b_quotient: Subspace,
    pub u: Subspace,
    pub contained: bool,
}

/// The unique `w` with `(σ^{-1} - I) w = v`, for an action without fixed vectors.
pub fn solve_fixed_point_conjugator(sigma: &Matrix, v: &[FieldScalar], layer: usize) -> Result<Vec<FieldScalar>, RootError> {
    let m = &inv(sigma) - &Matrix::identity(sigma.field(), sigma.rows());
    let m_inv = m.inverse().expect("square").ok_or(RootError::FixedSpaceNonzero { layer })?;
    Ok(m_inv.mul_vec(v).expect("layer vector length"))
}

impl RootEngine<'_> {
    pub(crate) fn descend(&self, target: &Matrix, b: &DiagClass, k: u64, strict: bool) -> Result<Descent, RootError> {
        let rep = self.quotient().lift_class(b)?;
        let ki = i64::try_from(k).map_err(|_| RootError::Unsupported(format!("k = {k} too large")))?;
        let mut y = rep.clone();
        let mut forced = true;
        for (j, layer) in self.series().layers().iter().enumerate() {
            let sigma = self.series().layer_action(&rep, j)?.matrix;
            let theta = theta_from_action(b.clone(), j, &sigma, k);
            let defect = &y.pow(-ki)? * target;
            let v = layer.coordinates(&defect).ok_or(RootError::DefectOutsideLayer { layer: j })?;
            if v.iter().all(FieldScalar::is_zero) {
                continue;
            }
            let w = match &theta.inverse {
                Some(t) => t.mul_vec(&v).expect("layer vector length"),
                None if strict => return Err(RootError::NotInBStar { b: b.clone(), layer: j }),
                None => match theta.matrix.solve_linear(&v).expect("layer vector length") {
                    Some(w) => {
                        forced = false;
                        w
                    }
                    None => return Ok(Descent::Blocked { layer: j, forced }),
                },
            };
            y = &y * &layer.lift(&w)?;
        }
        if y.pow(ki)? != *target {
            return if strict {
                Err(RootError::VerificationFailed("constructed y^k differs from the target".into()))
            } else {
                Ok(Descent::Blocked { layer: self.series().len(), forced: false })
            };
        }
        Ok(Descent::Root(y))
    }

    /// A `y` with `y^k = x n` and class `b`, built by one θ-solve per layer.
    pub fn construct_root(&self, x: &Matrix, n: &Matrix, b: &DiagClass, k: u64) -> Result<Matrix, RootError> {
        self.check_k(k)?;
        let a = self.class_of(x)?;
        if !self.group().unipotent_membership(n) {
            return Err(RootError::NotUnipotent);
        }
        if b.pow(k as i64) != a {
            return Err(RootError::NotARoot { b: b.clone() });
        }
        for j in 0..self.series().len() {
            let theta = self.theta_operator(b, j, k)?;
            if theta.inverse.is_none() {
                return Err(RootError::NotInBStar { b: b.clone(), layer: j });
            }
        }
        let target = x * n;
        let Descent::Root(y) = self.descend(&target, b, k, true)? else {
            unreachable!("strict descent either succeeds or errors");
        };
        if self.group().diag_class(&y) != *b {
            return Err(RootError::VerificationFailed("root has the wrong class".into()));
        }
        Ok(y)
    }

    /// `w` with `x · lift(v) = lift(w) · x · lift(w)^{-1}` on layer `j`.
    pub fn fixed_point_conjugator(&self, x: &Matrix, v: &[FieldScalar], j: usize) -> Result<Vec<FieldScalar>, RootError> {
        self.class_of(x)?;
        let sigma = self.series().layer_action(x, j)?.matrix;
        solve_fixed_point_conjugator(&sigma, v, j)
    }

    pub fn obstruction_subspace(&self, x: &Matrix, b: &DiagClass, j: usize, k: u64) -> Result<ObstructionSubspace, RootError> {
        self.check_k(k)?;
        let a = self.class_of(x)?;
        if b.pow(k as i64) != a {
            return Err(RootError::NotARoot { b: b.clone() });
        }
        let rep = self.quotient().lift_class(b)?;
        let sigma_a = self.series().layer_action(x, j)?.matrix;
        let sigma_b = self.series().layer_action(&rep, j)?.matrix;
        let id = Matrix::identity(sigma_a.field(), sigma_a.rows());
        let fixed_a = (&sigma_a - &id).kernel_basis();
        let fixed_b = (&sigma_b - &id).kernel_basis();
        if fixed_a == fixed_b {
            return Err(RootError::Precondition(format!("a and b fix the same vectors on layer {j}")));
        }
        let image_a_minus_i = Subspace::image_of(&(&sigma_a - &id));
        let c = image_a_minus_i.equations();
        let fixed_b_quotient = (&c * &(&sigma_b - &id)).kernel_basis();
        let u = image_a_minus_i.sum(&fixed_b_quotient).expect("same ambient space");
        let theta = theta_from_action(b.clone(), j, &sigma_b, k);
        let image_theta = Subspace::image_of(&theta.matrix);
        let contained = image_theta.is_subspace_of(&u);
        Ok(ObstructionSubspace { layer: j, b: b.clone(), image_theta, image_a_minus_i, fixed_b_quotient, u, contained })
    }
}
