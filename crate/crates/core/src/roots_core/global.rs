use std::collections::HashSet;

use crate::exactalg::{Matrix, Polynomial};
use crate::group_ctx::DiagClass;

use super::construct::Descent;
use super::{RootEngine, RootError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerRegularity {
    pub layer: usize,
    pub char_poly: Polynomial,
    /// `gcd(char_poly, 1 + x + ... + x^(k-1))`.
    pub gcd: Polynomial,
}

/// P_k-regularity of an element, with the spectrum read from its layer actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub element: Matrix,
    pub k: u64,
    pub layers: Vec<LayerRegularity>,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub k: u64,
    pub classes_checked: usize,
    pub surjective: bool,
    pub first_failure: Option<DiagClass>,
}

/// Element-level answer to "is x a k-th power".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    Root(Matrix),
    NoRoot,
    Unsupported(String),
}

fn commute(a: &Matrix, b: &Matrix) -> bool {
    a * b == b * a
}

/// A small generating set of a finite subgroup given by its elements.
fn generating_set(elements: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let id = Matrix::identity(first.field(), first.rows());
    let mut gens: Vec<Matrix> = Vec::new();
    let mut span: HashSet<Matrix> = HashSet::from([id.clone()]);
    for h in elements {
        if span.contains(h) {
            continue;
        }
        gens.push(h.clone());
        let mut frontier: Vec<Matrix> = span.iter().cloned().collect();
        while let Some(m) = frontier.pop() {
            for g in &gens {
                let next = &m * g;
                if span.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    gens
}

impl RootEngine<'_> {
    fn elements(&self, what: &str) -> Result<&[Matrix], RootError> {
        self.group()
            .elements()
            .ok_or_else(|| RootError::Unsupported(format!("{what} needs an enumerated (prime-field) group")))
    }

    pub fn pk_regularity(&self, g: &Matrix, k: u64) -> Result<RegularityReport, RootError> {
        if k == 0 {
            return Err(RootError::ZeroK);
        }
        let field = self.group().field();
        let cyclo = Polynomial::geometric(field, k);
        let mut layers = Vec::new();
        for (j, sigma) in self.actions(g)?.into_iter().enumerate() {
            let char_poly = sigma.char_poly().expect("square");
            let gcd = char_poly.gcd(&cyclo).expect("same field");
            layers.push(LayerRegularity { layer: j, char_poly, gcd });
        }
        let regular = layers.iter().all(|l| l.gcd.is_constant());
        Ok(RegularityReport { element: g.clone(), k, layers, regular })
    }

    /// Checks one representative per class of `A`, classes in lexicographic order.
    pub fn group_pk_surjective(&self, k: u64) -> Result<SurjectivityReport, RootError> {
        self.check_k(k)?;
        let mut classes = self.quotient().classes().ok_or_else(|| {
            RootError::Unsupported("the abelian quotient is infinite (positive-rank lattice)".into())
        })?;
        classes.sort_by(|x, y| x.canonical_cmp(y));
        let mut checked = 0;
        for c in &classes {
            let rep = self.quotient().lift_class(c)?;
            checked += 1;
            if self.bstar_filter(&rep, k)?.survivors.is_empty() {
                return Ok(SurjectivityReport { k, classes_checked: checked, surjective: false, first_failure: Some(c.clone()) });
            }
        }
        Ok(SurjectivityReport { k, classes_checked: checked, surjective: true, first_failure: None })
    }

    pub fn center(&self) -> Result<Vec<Matrix>, RootError> {
        let elements = self.elements("the center")?;
        let gens = self.group().generators();
        Ok(elements.iter().filter(|z| gens.iter().all(|g| commute(z, g))).cloned().collect())
    }

    /// Whether `z ↦ z^k` maps the center onto itself.
    pub fn center_pk_surjective(&self, k: u64) -> Result<bool, RootError> {
        if k == 0 {
            return Err(RootError::ZeroK);
        }
        let center = self.center()?;
        let ki = k as i64;
        let powers: HashSet<Matrix> = center.iter().map(|z| z.pow(ki).expect("invertible")).collect();
        Ok(center.iter().all(|z| powers.contains(z)))
    }

    /// `Z_G(x)` in enumeration order.
    pub fn centralizer(&self, x: &Matrix) -> Result<Vec<Matrix>, RootError> {
        let elements = self.elements("the centralizer")?;
        Ok(elements.iter().filter(|g| commute(g, x)).cloned().collect())
    }

    /// A k-th root of a diagonal `x` inside `Z(Z_G(x))`, searched exhaustively.
    pub fn center_of_centralizer_root(&self, x: &Matrix, k: u64) -> Result<Option<Matrix>, RootError> {
        self.check_k(k)?;
        self.class_of(x)?;
        let n = x.rows();
        if (0..n).any(|i| (i + 1..n).any(|j| !x.get(i, j).is_zero())) {
            return Err(RootError::Unsupported("x is not diagonal, so it is not known to be semisimple".into()));
        }
        let zx = self.centralizer(x)?;
        let gens = generating_set(&zx);
        let ki = k as i64;
        Ok(zx
            .into_iter()
            .filter(|z| gens.iter().all(|g| commute(z, g)))
            .find(|z| z.pow(ki).expect("invertible") == *x))
    }

    /// For each k, whether `x` itself is a k-th power.
    pub fn multi_k_probe(&self, x: &Matrix, ks: &[u64]) -> Result<Vec<(u64, Probe)>, RootError> {
        self.class_of(x)?;
        let mut out = Vec::new();
        for &k in ks {
            if k == 0 {
                return Err(RootError::ZeroK);
            }
            let probe = match self.group().elements() {
                Some(elements) => {
                    let ki = k as i64;
                    match elements.iter().find(|y| y.pow(ki).expect("invertible") == *x) {
                        Some(y) => Probe::Root(y.clone()),
                        None => Probe::NoRoot,
                    }
                }
                None => self.probe_by_descent(x, k)?,
            };
            out.push((k, probe));
        }
        Ok(out)
    }

    fn probe_by_descent(&self, x: &Matrix, k: u64) -> Result<Probe, RootError> {
        let a = self.group().diag_class(x);
        let roots = self.quotient().kth_root_classes(&a, k)?;
        let mut undecided = None;
        for b in &roots.roots {
            match self.descend(x, b, k, false)? {
                Descent::Root(y) => return Ok(Probe::Root(y)),
                Descent::Blocked { forced: true, .. } => {}
                Descent::Blocked { layer, forced: false } => {
                    undecided.get_or_insert(format!("class {b} blocked at layer {layer} after a free choice"));
                }
            }
        }
        Ok(match undecided {
            Some(reason) => Probe::Unsupported(reason),
            None => Probe::NoRoot,
        })
    }
}
