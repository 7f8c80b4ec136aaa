//! Deciding whether a coset `xN` consists of k-th powers, and building roots.
//!
//! A class `b` with `b^k = a` survives when, on every layer, each vector
//! fixed by `a` is also fixed by `b`. Equivalently the operator
//! `θ_j = Σ_{i<k} σ_j(g)^{-i}` is invertible on every layer, and then a root
//! of any `xn` is obtained by one linear solve per layer.

mod certificate;
mod construct;
mod global;

use thiserror::Error;

use crate::abelian_quotient::{AbelianQuotient, RootSet};
use crate::exactalg::{AlgebraError, FieldScalar, Matrix, Subspace};
use crate::group_ctx::{inv, CentralSeries, DiagClass, GroupError, SeriesStrategy, TriangularGroup};

pub use certificate::{Certificate, LayerObstruction, Obstruction, Witness};
pub use construct::{solve_fixed_point_conjugator, ObstructionSubspace};
pub use global::{LayerRegularity, Probe, RegularityReport, SurjectivityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k = {k} is not coprime to the characteristic {characteristic}")]
    NotCoprime { k: u64, characteristic: u64 },
    #[error("element is not in the group")]
    NotInGroup,
    #[error("element is not in the unipotent part")]
    NotUnipotent,
    #[error("class {b} is not a k-th root of the class of the element")]
    NotARoot { b: DiagClass },
    #[error("class {b} fails the fixed-space test at layer {layer}")]
    NotInBStar { b: DiagClass, layer: usize },
    #[error("defect left the level of layer {layer}")]
    DefectOutsideLayer { layer: usize },
    #[error("the action on layer {layer} has nonzero fixed vectors")]
    FixedSpaceNonzero { layer: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("self-check failed: {0}")]
    VerificationFailed(String),
}

/// Outcome of one layer test for one candidate class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerDetail {
    Fixed { fixed_a: Subspace, fixed_b: Subspace },
    Theta { det: FieldScalar },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerCheck {
    pub layer: usize,
    pub pass: bool,
    pub detail: LayerDetail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateVerdict {
    pub b: DiagClass,
    pub representative: Matrix,
    pub layers: Vec<LayerCheck>,
    pub survives: bool,
}

impl CandidateVerdict {
    pub fn first_failure(&self) -> Option<&LayerCheck> {
        self.layers.iter().find(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BStarResult {
    pub roots: RootSet,
    pub candidates: Vec<CandidateVerdict>,
    pub survivors: Vec<DiagClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    pub b: DiagClass,
    pub layer: usize,
    pub matrix: Matrix,
    pub det: FieldScalar,
    pub inverse: Option<Matrix>,
}

/// Decision procedures over one group context and one central series.
#[derive(Clone, Debug)]
pub struct RootEngine<'g> {
    group: &'g TriangularGroup,
    quotient: AbelianQuotient,
    series: CentralSeries,
}

impl<'g> RootEngine<'g> {
    pub fn new(group: &'g TriangularGroup, strategy: SeriesStrategy) -> Result<RootEngine<'g>, RootError> {
        Ok(RootEngine {
            group,
            quotient: AbelianQuotient::build(group)?,
            series: group.central_series(strategy)?,
        })
    }

    pub fn group(&self) -> &TriangularGroup {
        self.group
    }

    pub fn quotient(&self) -> &AbelianQuotient {
        &self.quotient
    }

    pub fn series(&self) -> &CentralSeries {
        &self.series
    }

    pub(crate) fn check_k(&self, k: u64) -> Result<(), RootError> {
        if k == 0 {
            return Err(RootError::ZeroK);
        }
        let p = self.group.field().characteristic();
        if p != 0 && k % p == 0 {
            return Err(RootError::NotCoprime { k, characteristic: p });
        }
        Ok(())
    }

    pub(crate) fn class_of(&self, x: &Matrix) -> Result<DiagClass, RootError> {
        if !self.group.contains(x) {
            return Err(RootError::NotInGroup);
        }
        Ok(self.group.diag_class(x))
    }

    /// `σ_j` of a representative, for every layer.
    pub fn actions(&self, g: &Matrix) -> Result<Vec<Matrix>, RootError> {
        (0..self.series.len()).map(|j| Ok(self.series.layer_action(g, j)?.matrix)).collect()
    }

    fn candidates(&self, x: &Matrix, k: u64) -> Result<(DiagClass, RootSet), RootError> {
        self.check_k(k)?;
        let a = self.class_of(x)?;
        let roots = self.quotient.kth_root_classes(&a, k)?;
        Ok((a, roots))
    }

    /// Literal fixed-space filter: `F_j(a) ⊆ F_j(b)` on every layer.
    pub fn bstar_filter(&self, x: &Matrix, k: u64) -> Result<BStarResult, RootError> {
        let (_, roots) = self.candidates(x, k)?;
        let mut candidates = Vec::new();
        for b in &roots.roots {
            let rep = self.quotient.lift_class(b)?;
            let mut layers = Vec::new();
            for j in 0..self.series.len() {
                let fixed_a = self.series.fixed_subspace(x, j)?;
                let fixed_b = self.series.fixed_subspace(&rep, j)?;
                let pass = fixed_a.is_subspace_of(&fixed_b);
                layers.push(LayerCheck { layer: j, pass, detail: LayerDetail::Fixed { fixed_a, fixed_b } });
            }
            let survives = layers.iter().all(|c| c.pass);
            candidates.push(CandidateVerdict { b: b.clone(), representative: rep, layers, survives });
        }
        Ok(finish(roots, candidates))
    }

    pub fn theta_operator(&self, b: &DiagClass, j: usize, k: u64) -> Result<ThetaOperator, RootError> {
        if k == 0 {
            return Err(RootError::ZeroK);
        }
        let rep = self.quotient.lift_class(b)?;
        let sigma = self.series.layer_action(&rep, j)?.matrix;
        Ok(theta_from_action(b.clone(), j, &sigma, k))
    }

    /// Survival read off `det θ_j(b) ≠ 0`.
    pub fn bstar_via_theta(&self, x: &Matrix, k: u64) -> Result<BStarResult, RootError> {
        let (_, roots) = self.candidates(x, k)?;
        let mut candidates = Vec::new();
        for b in &roots.roots {
            let rep = self.quotient.lift_class(b)?;
            let mut layers = Vec::new();
            for j in 0..self.series.len() {
                let theta = self.theta_operator(b, j, k)?;
                layers.push(LayerCheck { layer: j, pass: !theta.det.is_zero(), detail: LayerDetail::Theta { det: theta.det } });
            }
            let survives = layers.iter().all(|c| c.pass);
            candidates.push(CandidateVerdict { b: b.clone(), representative: rep, layers, survives });
        }
        Ok(finish(roots, candidates))
    }
}

fn finish(roots: RootSet, candidates: Vec<CandidateVerdict>) -> BStarResult {
    let survivors = candidates.iter().filter(|c| c.survives).map(|c| c.b.clone()).collect();
    BStarResult { roots, candidates, survivors }
}

/// `Σ_{i=0}^{k-1} σ^{-i}` with its determinant and inverse.
pub fn theta_from_action(b: DiagClass, layer: usize, sigma: &Matrix, k: u64) -> ThetaOperator {
    let field = sigma.field();
    let d = sigma.rows();
    let sigma_inv = inv(sigma);
    let mut power = Matrix::identity(field, d);
    let mut sum = Matrix::zeros(field, d, d);
    for _ in 0..k {
        sum = &sum + &power;
        power = &power * &sigma_inv;
    }
    let det = sum.det().expect("square");
    let inverse = sum.inverse().expect("square");
    ThetaOperator { b, layer, matrix: sum, det, inverse }
}

#[cfg(test)]
pub(crate) mod tests;
