//! Brute-force ground truth for finite groups.
//!
//! The enumeration here is independent of the decision procedures: it only
//! multiplies matrices and compares them.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::exactalg::{Field, Matrix};
use crate::group_ctx::{DiagClass, SeriesStrategy, TriangularGroup};
use crate::roots_core::{RootEngine, RootError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the oracle only handles prime fields, got {0}")]
    InfiniteGroup(Field),
    #[error("enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("element is not in the enumerated group")]
    NotAnElement,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Every element of a finite group, in breadth-first order from the generators.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    /// Word length at which each element was first reached.
    depth: Vec<usize>,
    cap: usize,
}

/// The image of `g ↦ g^k`, with preimage counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerImage {
    pub k: u64,
    pub marked: Vec<bool>,
    pub multiplicity: Vec<usize>,
}

impl PowerImage {
    pub fn size(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub class: DiagClass,
    pub representative: Matrix,
    pub k: u64,
    pub criterion: bool,
    pub oracle: bool,
    pub power_image_size: usize,
}

impl ComparisonRow {
    pub fn matches(&self) -> bool {
        self.criterion == self.oracle
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub group_order: usize,
    pub rows: Vec<ComparisonRow>,
    /// Values of k left out because they are not coprime to p.
    pub skipped: Vec<u64>,
}

impl ComparisonReport {
    pub fn mismatches(&self) -> Vec<&ComparisonRow> {
        self.rows.iter().filter(|r| !r.matches()).collect()
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(ComparisonRow::matches)
    }
}

pub fn enumerate_group(ctx: &TriangularGroup, cap: usize) -> Result<EnumeratedGroup, OracleError> {
    if !ctx.field().is_finite() {
        return Err(OracleError::InfiniteGroup(ctx.field()));
    }
    let id = Matrix::identity(ctx.field(), ctx.dim());
    let mut g = EnumeratedGroup { elements: vec![id.clone()], index: HashMap::from([(id, 0)]), depth: vec![0], cap };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for gen in ctx.generators() {
            let next = &g.elements[i] * gen;
            if g.index.contains_key(&next) {
                continue;
            }
            if g.elements.len() >= cap {
                return Err(OracleError::CapExceeded(cap));
            }
            g.index.insert(next.clone(), g.elements.len());
            queue.push_back(g.elements.len());
            g.elements.push(next);
            g.depth.push(g.depth[i] + 1);
        }
    }
    Ok(g)
}

impl EnumeratedGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn power_image(&self, k: u64) -> PowerImage {
        let mut marked = vec![false; self.len()];
        let mut multiplicity = vec![0; self.len()];
        for g in &self.elements {
            let mut p = Matrix::identity(g.field(), g.rows());
            for _ in 0..k {
                p = &p * g;
            }
            let i = self.index[&p];
            marked[i] = true;
            multiplicity[i] += 1;
        }
        PowerImage { k, marked, multiplicity }
    }

    /// The coset `xN`: elements with the same diagonal as `x`.
    pub fn coset(&self, x: &Matrix) -> Vec<usize> {
        let d = x.diagonal();
        (0..self.len()).filter(|&i| self.elements[i].diagonal() == d).collect()
    }

    /// Whether every element of `xN` is a k-th power.
    pub fn coset_coverage_truth(&self, image: &PowerImage, x: &Matrix) -> Result<bool, OracleError> {
        self.index_of(x).ok_or(OracleError::NotAnElement)?;
        Ok(self.coset(x).into_iter().all(|i| image.marked[i]))
    }

    pub fn centralizer(&self, x: &Matrix) -> Vec<Matrix> {
        self.elements.iter().filter(|g| *g * x == x * *g).cloned().collect()
    }

    pub fn center(&self) -> Vec<Matrix> {
        let all: Vec<&Matrix> = self.elements.iter().collect();
        self.elements.iter().filter(|z| all.iter().all(|g| *z * *g == *g * *z)).cloned().collect()
    }

    /// All k-th roots of `x` by exhaustive search.
    pub fn roots_of(&self, x: &Matrix, k: u64) -> Vec<Matrix> {
        self.elements
            .iter()
            .filter(|g| {
                let mut p = Matrix::identity(g.field(), g.rows());
                for _ in 0..k {
                    p = &p * *g;
                }
                p == *x
            })
            .cloned()
            .collect()
    }

    /// The first element of each diagonal class, in enumeration order.
    pub fn class_representatives(&self) -> Vec<Matrix> {
        let mut seen = HashSet::new();
        self.elements.iter().filter(|g| seen.insert(g.diagonal())).cloned().collect()
    }
}

/// Runs the coset decision against the enumerated truth for every class and k.
pub fn compare_all(
    ctx: &TriangularGroup,
    enumerated: &EnumeratedGroup,
    ks: &[u64],
    strategy: SeriesStrategy,
) -> Result<ComparisonReport, OracleError> {
    let engine = RootEngine::new(ctx, strategy)?;
    let p = ctx.field().characteristic();
    let reps = enumerated.class_representatives();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &k in ks {
        if p != 0 && k % p == 0 {
            skipped.push(k);
            continue;
        }
        let image = enumerated.power_image(k);
        for x in &reps {
            let cert = engine.coset_root_decision(x, k)?;
            rows.push(ComparisonRow {
                class: DiagClass(x.diagonal()),
                representative: x.clone(),
                k,
                criterion: cert.decision,
                oracle: enumerated.coset_coverage_truth(&image, x)?,
                power_image_size: image.size(),
            });
        }
    }
    Ok(ComparisonReport { group_order: enumerated.len(), rows, skipped })
}
