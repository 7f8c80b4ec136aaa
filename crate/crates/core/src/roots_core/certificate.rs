use crate::exactalg::{FieldScalar, Matrix};
use crate::group_ctx::{inv, DiagClass, SeriesStrategy};

use super::{LayerDetail, RootEngine, RootError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub b: DiagClass,
    pub representative: Matrix,
    /// A k-th root of the queried element itself.
    pub root: Matrix,
    pub root_power: Matrix,
}

/// A vector fixed by `a` but not by `b` on one layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerObstruction {
    pub b: DiagClass,
    pub representative: Matrix,
    pub layer: usize,
    pub layer_description: String,
    pub positions: Vec<(usize, usize)>,
    /// Echelon basis of the whole superdiagonal (or merged) space.
    pub basis: Vec<Vec<FieldScalar>>,
    pub range: (usize, usize),
    pub vector: Vec<FieldScalar>,
    pub vector_lift: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// No class `b` with `b^k = a`.
    EmptyRootSet,
    /// One failing layer for every `b` in `B`.
    Layers(Vec<LayerObstruction>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub k: u64,
    pub element: Matrix,
    pub class: DiagClass,
    pub strategy: SeriesStrategy,
    pub layer_dims: Vec<usize>,
    pub roots: Vec<DiagClass>,
    pub survivors: Vec<DiagClass>,
    pub decision: bool,
    pub witness: Option<Witness>,
    pub obstruction: Option<Obstruction>,
    pub transcript: Vec<String>,
}

fn show(v: &[FieldScalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn show_set(v: &[DiagClass]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

impl RootEngine<'_> {
    /// Decides whether every element of `xN` is a k-th power.
    pub fn coset_root_decision(&self, x: &Matrix, k: u64) -> Result<Certificate, RootError> {
        let bstar = self.bstar_filter(x, k)?;
        let a = self.group().diag_class(x);
        let mut transcript = vec![
            format!("class a = {a}"),
            format!("series {} with layer dims {:?}", self.series().strategy(), self.series().dims()),
            format!("B = {}", show_set(&bstar.roots.roots)),
        ];
        let mut witness = None;
        let mut obstruction = None;
        if let Some(b) = bstar.survivors.first() {
            let representative = self.quotient().lift_class(b)?;
            let root = self.construct_root(x, &self.group().identity(), b, k)?;
            let root_power = root.pow(k as i64)?;
            transcript.push(format!("B* = {}", show_set(&bstar.survivors)));
            transcript.push(format!("witness b = {b}, root y = {root}"));
            witness = Some(Witness { b: b.clone(), representative, root, root_power });
        } else if bstar.roots.is_empty() {
            transcript.push("B is empty".into());
            obstruction = Some(Obstruction::EmptyRootSet);
        } else {
            let mut items = Vec::new();
            for cand in &bstar.candidates {
                let check = cand.first_failure().expect("non-survivors fail somewhere");
                let LayerDetail::Fixed { fixed_a, fixed_b } = &check.detail else {
                    unreachable!("the filter records fixed spaces");
                };
                let vector = fixed_a
                    .basis()
                    .iter()
                    .find(|v| !fixed_b.contains(v))
                    .cloned()
                    .expect("a failing layer has a vector fixed by a only");
                let layer = self.series().layer(check.layer)?;
                transcript.push(format!(
                    "b = {}: layer {} ({}) vector {} fixed by a, not by b",
                    cand.b,
                    check.layer,
                    layer.describe(),
                    show(&vector)
                ));
                items.push(LayerObstruction {
                    b: cand.b.clone(),
                    representative: cand.representative.clone(),
                    layer: check.layer,
                    layer_description: layer.describe(),
                    positions: layer.positions().to_vec(),
                    basis: layer.space().basis_vectors(),
                    range: layer.range(),
                    vector_lift: layer.lift(&vector)?,
                    vector,
                });
            }
            obstruction = Some(Obstruction::Layers(items));
        }
        let mut cert = Certificate {
            k,
            element: x.clone(),
            class: a,
            strategy: self.series().strategy(),
            layer_dims: self.series().dims(),
            roots: bstar.roots.roots.clone(),
            survivors: bstar.survivors.clone(),
            decision: witness.is_some(),
            witness,
            obstruction,
            transcript,
        };
        self.check_certificate(&cert)?;
        cert.transcript.push("self-check passed".into());
        Ok(cert)
    }

    /// Rechecks every claim of a certificate against this context.
    pub fn check_certificate(&self, cert: &Certificate) -> Result<(), RootError> {
        let fail = |m: String| Err(RootError::VerificationFailed(m));
        if self.group().diag_class(&cert.element) != cert.class {
            return fail("class of the element".into());
        }
        let roots = self.quotient().kth_root_classes(&cert.class, cert.k)?;
        if roots.roots != cert.roots {
            return fail("recomputed B differs".into());
        }
        match (&cert.witness, &cert.obstruction) {
            (Some(w), None) => {
                if w.root.pow(cert.k as i64)? != cert.element || w.root_power != cert.element {
                    return fail("y^k differs from the element".into());
                }
                if self.group().diag_class(&w.root) != w.b || !cert.roots.contains(&w.b) {
                    return fail("witness class".into());
                }
                if !self.group().contains(&w.root) {
                    return fail("root outside the group".into());
                }
            }
            (None, Some(Obstruction::EmptyRootSet)) => {
                if !cert.roots.is_empty() {
                    return fail("B is not empty".into());
                }
            }
            (None, Some(Obstruction::Layers(items))) => {
                if items.len() != cert.roots.len() || items.iter().zip(&cert.roots).any(|(o, b)| o.b != *b) {
                    return fail("obstructions do not cover B".into());
                }
                for o in items {
                    let layer = self.series().layer(o.layer)?;
                    if layer.coordinates(&o.vector_lift).as_deref() != Some(&o.vector[..]) {
                        return fail(format!("lift of the layer {} vector", o.layer));
                    }
                    let by_a = &(&cert.element * &o.vector_lift) * &inv(&cert.element);
                    let by_b = &(&o.representative * &o.vector_lift) * &inv(&o.representative);
                    if layer.coordinates(&by_a).as_deref() != Some(&o.vector[..]) {
                        return fail(format!("vector on layer {} is not fixed by a", o.layer));
                    }
                    if layer.coordinates(&by_b).as_deref() == Some(&o.vector[..]) {
                        return fail(format!("vector on layer {} is fixed by b", o.layer));
                    }
                }
            }
            _ => return fail("certificate must carry exactly one of witness and obstruction".into()),
        }
        Ok(())
    }
}
