//! Central series of `N` with vector-space layers.
//!
//! Every layer is a slice `[lo, hi)` of the echelon coordinates of a
//! subspace living in a fixed set of matrix positions. A superdiagonal layer
//! reads the entries of one superdiagonal of elements that vanish on all
//! earlier superdiagonals; the merged layer reads every strictly-upper entry
//! and is only available when `N` is a vector group.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::exactalg::{Field, FieldScalar, Matrix, Subspace};

use super::{exp_nilpotent, inv, strict_upper_positions, GroupError, TriangularGroup, UnipotentPart};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesStrategy {
    /// `N_j = N ∩ U_j`, one layer per nonzero superdiagonal.
    Superdiagonal,
    /// Superdiagonal layers split further along generator-invariant echelon flags.
    Refined,
    /// A single layer holding all of `N`; requires `(u - I)(v - I) = 0` on `N`.
    Merged,
}

impl fmt::Display for SeriesStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesStrategy::Superdiagonal => "superdiag",
            SeriesStrategy::Refined => "refined",
            SeriesStrategy::Merged => "merged",
        })
    }
}

impl FromStr for SeriesStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "superdiag" | "superdiagonal" => Ok(SeriesStrategy::Superdiagonal),
            "refined" => Ok(SeriesStrategy::Refined),
            "merged" => Ok(SeriesStrategy::Merged),
            other => Err(format!("unknown series strategy '{other}' (expected superdiag, refined or merged)")),
        }
    }
}

/// One quotient `N_{j-1}/N_j`.
#[derive(Clone, Debug)]
pub struct Layer {
    field: Field,
    n: usize,
    /// Superdiagonal read by this layer, or 0 for the merged layer.
    depth: usize,
    positions: Vec<(usize, usize)>,
    space: Subspace,
    lo: usize,
    hi: usize,
    /// Group elements realizing each basis vector of `space`.
    lifts: Vec<Matrix>,
    /// Lie elements realizing each basis vector (characteristic 0).
    lie_lifts: Option<Vec<Matrix>>,
}

/// Matrix of the conjugation action of an element on one layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerAction {
    pub element: Matrix,
    pub layer: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct CentralSeries {
    strategy: SeriesStrategy,
    layers: Vec<Layer>,
}

impl Layer {
    pub fn dim(&self) -> usize {
        self.hi - self.lo
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn range(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    /// Basis vectors of this layer, written in the coordinates of `positions`.
    pub fn basis(&self) -> &[Vec<FieldScalar>] {
        &self.space.basis()[self.lo..self.hi]
    }

    /// Entries at `positions` of the element with layer coordinates `w`.
    pub fn embed(&self, w: &[FieldScalar]) -> Vec<FieldScalar> {
        self.space.combine(&self.full(w))
    }

    fn full(&self, w: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(w.len(), self.dim(), "layer vector has the wrong length");
        let mut c = vec![self.field.zero(); self.space.dim()];
        c[self.lo..self.hi].clone_from_slice(w);
        c
    }

    /// Layer coordinates of `u`, or `None` when `u` is not in the level `N_{j-1}`.
    pub fn coordinates(&self, u: &Matrix) -> Option<Vec<FieldScalar>> {
        if u.rows() != self.n || !u.is_unitriangular() {
            return None;
        }
        if self.depth > 1 {
            let early = strict_upper_positions(self.n).into_iter().filter(|&(i, j)| j - i < self.depth);
            if early.into_iter().any(|(i, j)| !u.get(i, j).is_zero()) {
                return None;
            }
        }
        let v: Vec<FieldScalar> = self.positions.iter().map(|&(i, j)| u.get(i, j).clone()).collect();
        let c = self.space.coordinates(&v)?;
        if c[..self.lo].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(c[self.lo..self.hi].to_vec())
    }

    /// An element of the level `N_{j-1}` whose layer coordinates are `w`.
    pub fn lift(&self, w: &[FieldScalar]) -> Result<Matrix, GroupError> {
        let c = self.full(w);
        match &self.lie_lifts {
            Some(xs) => {
                let mut x = Matrix::zeros(self.field, self.n, self.n);
                for (ci, xi) in c.iter().zip(xs) {
                    if !ci.is_zero() {
                        x = &x + &xi.scale(ci);
                    }
                }
                exp_nilpotent(&x)
            }
            None => {
                let mut m = Matrix::identity(self.field, self.n);
                for (ci, l) in c.iter().zip(&self.lifts) {
                    if ci.is_zero() {
                        continue;
                    }
                    let e = match ci {
                        FieldScalar::Prime { residue, .. } => *residue as i64,
                        FieldScalar::Rational(_) => unreachable!("rational layers carry Lie lifts"),
                    };
                    m = &m * &l.pow(e)?;
                }
                Ok(m)
            }
        }
    }

    /// Human-readable summary, e.g. `superdiag 2 at (0,2)`.
    pub fn describe(&self) -> String {
        let pos: Vec<String> = self.positions.iter().map(|(i, j)| format!("({i},{j})")).collect();
        let head = if self.depth == 0 { "merged".to_string() } else { format!("superdiag {}", self.depth) };
        format!("{head} at {} coords [{}, {})", pos.join(" "), self.lo, self.hi)
    }

    fn sliced(&self, lo: usize, hi: usize) -> Layer {
        Layer { lo, hi, ..self.clone() }
    }
}

impl CentralSeries {
    pub fn build(ctx: &TriangularGroup, strategy: SeriesStrategy) -> Result<CentralSeries, GroupError> {
        let layers = match strategy {
            SeriesStrategy::Superdiagonal => superdiagonal_layers(ctx)?,
            SeriesStrategy::Refined => {
                let mut out = Vec::new();
                for layer in superdiagonal_layers(ctx)? {
                    out.extend(refine(ctx, &layer)?);
                }
                out
            }
            SeriesStrategy::Merged => merged_layer(ctx)?.into_iter().collect(),
        };
        Ok(CentralSeries { strategy, layers })
    }

    pub fn strategy(&self) -> SeriesStrategy {
        self.strategy
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(Layer::dim).collect()
    }

    pub fn layer(&self, j: usize) -> Result<&Layer, GroupError> {
        self.layers.get(j).ok_or(GroupError::NoSuchLayer(j))
    }

    pub fn layer_action(&self, g: &Matrix, j: usize) -> Result<LayerAction, GroupError> {
        let layer = self.layer(j)?;
        Ok(LayerAction { element: g.clone(), layer: j, matrix: action_matrix(layer, g, &inv(g))? })
    }

    /// `ker(σ_j(g) - I)`.
    pub fn fixed_subspace(&self, g: &Matrix, j: usize) -> Result<Subspace, GroupError> {
        let a = self.layer_action(g, j)?;
        let field = a.matrix.field();
        Ok((&a.matrix - &Matrix::identity(field, a.matrix.rows())).kernel_basis())
    }
}

fn action_matrix(layer: &Layer, g: &Matrix, g_inv: &Matrix) -> Result<Matrix, GroupError> {
    let d = layer.dim();
    let field = layer.field;
    let mut m = Matrix::zeros(field, d, d);
    for r in 0..d {
        let mut e = vec![field.zero(); d];
        e[r] = field.one();
        let conj = &(g * &layer.lift(&e)?) * g_inv;
        let c = layer
            .coordinates(&conj)
            .ok_or_else(|| GroupError::NotInLayer(format!("conjugate of basis vector {r} left {}", layer.describe())))?;
        for (s, x) in c.into_iter().enumerate() {
            m.set(s, r, x);
        }
    }
    Ok(m)
}

fn superdiag_positions(n: usize, d: usize) -> Vec<(usize, usize)> {
    (0..n - d).map(|i| (i, i + d)).collect()
}

fn superdiagonal_layers(ctx: &TriangularGroup) -> Result<Vec<Layer>, GroupError> {
    let n = ctx.dim();
    let field = ctx.field();
    let mut layers = Vec::new();
    for d in 1..n {
        let positions = superdiag_positions(n, d);
        let layer = match ctx.unipotent() {
            UnipotentPart::Enumerated { elements, .. } => {
                let mut preimage: HashMap<Vec<FieldScalar>, &Matrix> = HashMap::new();
                for u in elements {
                    let early_zero = (1..d).all(|e| superdiag_positions(n, e).iter().all(|&(i, j)| u.get(i, j).is_zero()));
                    if early_zero {
                        let v: Vec<FieldScalar> = positions.iter().map(|&(i, j)| u.get(i, j).clone()).collect();
                        preimage.entry(v).or_insert(u);
                    }
                }
                let mut keys: Vec<Vec<FieldScalar>> = preimage.keys().cloned().collect();
                keys.sort_by(|a, b| cmp_vec(a, b));
                let space = Subspace::from_spanning(field, positions.len(), keys)?;
                let lifts = space
                    .basis()
                    .iter()
                    .map(|b| {
                        preimage
                            .get(b)
                            .map(|&m| m.clone())
                            .ok_or_else(|| GroupError::NotInLayer(format!("superdiagonal {d} image is not a subspace")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Layer { field, n, depth: d, positions, space, lo: 0, hi: 0, lifts, lie_lifts: None }
            }
            UnipotentPart::Lie { span, .. } => {
                let all = strict_upper_positions(n);
                let prefix = all.iter().filter(|&&(i, j)| j - i < d).count();
                let width = positions.len();
                let level: Vec<Vec<FieldScalar>> = if prefix == 0 {
                    span.basis_vectors()
                } else {
                    let rows: Vec<Vec<FieldScalar>> =
                        (0..prefix).map(|t| span.basis().iter().map(|b| b[t].clone()).collect()).collect();
                    if span.dim() == 0 {
                        Vec::new()
                    } else {
                        let p = Matrix::from_rows(field, rows)?;
                        p.kernel_basis().basis().iter().map(|c| span.combine(c)).collect()
                    }
                };
                let proj: Vec<Vec<FieldScalar>> = level.iter().map(|v| v[prefix..prefix + width].to_vec()).collect();
                let space = Subspace::from_spanning(field, width, proj.clone())?;
                let mut lie = Vec::new();
                if space.dim() > 0 {
                    let q = Matrix::from_rows(field, proj)?.transpose();
                    for b in space.basis() {
                        let y = q.solve_linear(b)?.expect("layer basis lies in the projected span");
                        let mut v = vec![field.zero(); all.len()];
                        for (yl, lv) in y.iter().zip(&level) {
                            for (o, x) in v.iter_mut().zip(lv) {
                                *o = &*o + &(yl * x);
                            }
                        }
                        lie.push(super::unflatten_strict_upper(field, n, &v));
                    }
                }
                let lifts = lie.iter().map(exp_nilpotent).collect::<Result<Vec<_>, _>>()?;
                Layer { field, n, depth: d, positions, space, lo: 0, hi: 0, lifts, lie_lifts: Some(lie) }
            }
        };
        let dim = layer.space.dim();
        if dim > 0 {
            layers.push(layer.sliced(0, dim));
        }
    }
    Ok(layers)
}

fn cmp_vec(a: &[FieldScalar], b: &[FieldScalar]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Splits a layer at every echelon tail span that all generators preserve.
fn refine(ctx: &TriangularGroup, layer: &Layer) -> Result<Vec<Layer>, GroupError> {
    let m = layer.dim();
    let sigmas = ctx
        .generators()
        .iter()
        .map(|g| action_matrix(layer, g, &inv(g)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cuts = vec![0];
    for i in 1..m {
        let invariant = sigmas.iter().all(|s| (0..i).all(|row| (i..m).all(|col| s.get(row, col).is_zero())));
        if invariant {
            cuts.push(i);
        }
    }
    cuts.push(m);
    Ok(cuts.windows(2).map(|w| layer.sliced(w[0], w[1])).collect())
}

fn row_major_positions(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn merged_layer(ctx: &TriangularGroup) -> Result<Option<Layer>, GroupError> {
    let n = ctx.dim();
    let field = ctx.field();
    let positions = row_major_positions(n);
    let read = |m: &Matrix| -> Vec<FieldScalar> { positions.iter().map(|&(i, j)| m.get(i, j).clone()).collect() };
    let write = |v: &[FieldScalar]| -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for (&(i, j), x) in positions.iter().zip(v) {
            m.set(i, j, x.clone());
        }
        m
    };
    let spanning: Vec<Vec<FieldScalar>> = match ctx.unipotent() {
        UnipotentPart::Enumerated { elements, .. } => {
            let id = ctx.identity();
            elements.iter().map(|u| read(&(u - &id))).collect()
        }
        UnipotentPart::Lie { basis, .. } => basis.iter().map(read).collect(),
    };
    let space = Subspace::from_spanning(field, positions.len(), spanning)?;
    let xs: Vec<Matrix> = space.basis().iter().map(|b| write(b)).collect();
    for x in &xs {
        for y in &xs {
            if !(x * y).is_zero() {
                return Err(GroupError::StrategyUnavailable(
                    SeriesStrategy::Merged,
                    "the unipotent part is not a vector group".into(),
                ));
            }
        }
    }
    let id = ctx.identity();
    let lifts: Vec<Matrix> = xs.iter().map(|x| &id + x).collect();
    if lifts.iter().any(|l| !ctx.unipotent_membership(l)) {
        return Err(GroupError::StrategyUnavailable(SeriesStrategy::Merged, "lifted basis leaves N".into()));
    }
    let dim = space.dim();
    if dim == 0 {
        return Ok(None);
    }
    let lie_lifts = matches!(ctx.unipotent(), UnipotentPart::Lie { .. }).then_some(xs);
    Ok(Some(Layer { field, n, depth: 0, positions, space, lo: 0, hi: dim, lifts, lie_lifts }))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::GroupSpec;
    use super::*;

    fn diag(field: Field, d: &[i64]) -> Matrix {
        Matrix::diagonal_matrix(field, &d.iter().map(|&x| field.from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn g5_superdiagonal_layers() {
        let ctx = g5_spec().validate().unwrap();
        let s = ctx.central_series(SeriesStrategy::Superdiagonal).unwrap();
        assert_eq!(s.dims(), vec![1, 1]);
        assert_eq!(s.layer(0).unwrap().positions(), &[(0, 1), (1, 2)]);
        assert_eq!(s.layer(1).unwrap().positions(), &[(0, 2)]);
        let g = &ctx.generators()[0];
        let f5 = f(5);
        assert_eq!(s.layer_action(g, 0).unwrap().matrix, Matrix::from_i64(f5, &[&[2]]));
        assert_eq!(s.layer_action(g, 1).unwrap().matrix, Matrix::from_i64(f5, &[&[4]]));
        let u = translation(5, 3, 1);
        for j in 0..2 {
            assert!(s.layer_action(&u, j).unwrap().matrix.is_identity());
        }
    }

    #[test]
    fn g5_merged_layer() {
        let ctx = g5_spec().validate().unwrap();
        let s = ctx.central_series(SeriesStrategy::Merged).unwrap();
        assert_eq!(s.dims(), vec![2]);
        let g = &ctx.generators()[0];
        let g2 = g * g;
        assert_eq!(s.layer_action(&g2, 0).unwrap().matrix, diag(f(5), &[1, 4]));
        let fixed = s.fixed_subspace(&g2, 0).unwrap();
        assert_eq!(fixed, Subspace::from_spanning(f(5), 2, vec![vec![f(5).one(), f(5).zero()]]).unwrap());
        assert!(s.fixed_subspace(g, 0).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_q_layers() {
        let ctx = heisenberg_q_spec(vec![]).validate().unwrap();
        let s = ctx.central_series(SeriesStrategy::Superdiagonal).unwrap();
        assert_eq!(s.dims(), vec![2, 1]);
        let l0 = s.layer(0).unwrap();
        let q = Field::Rational;
        let w = vec![q.from_i64(3), q.parse("1/2").unwrap()];
        let u = l0.lift(&w).unwrap();
        assert_eq!(l0.coordinates(&u).unwrap(), w);
        assert!(matches!(
            ctx.central_series(SeriesStrategy::Merged),
            Err(GroupError::StrategyUnavailable(..))
        ));
    }

    #[test]
    fn refined_splits_trivial_action() {
        // abelian N = F_3^2 in the last column, trivial action
        let f3 = f(3);
        let spec = GroupSpec {
            field: f3,
            dim: 3,
            generators: vec![
                Matrix::from_i64(f3, &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]),
                Matrix::from_i64(f3, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
            ],
            lie_algebra: None,
            cap: None,
        };
        let ctx = spec.validate().unwrap();
        let merged = ctx.central_series(SeriesStrategy::Merged).unwrap();
        assert_eq!(merged.dims(), vec![2]);
        // the merged layer is not a superdiagonal layer, but refinement of
        // a 2-dim superdiagonal layer with trivial action gives 1-dim pieces
        let spec2 = GroupSpec {
            field: f3,
            dim: 3,
            generators: vec![
                Matrix::from_i64(f3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
                Matrix::from_i64(f3, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
                Matrix::from_i64(f3, &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]),
            ],
            lie_algebra: None,
            cap: None,
        };
        let ctx2 = spec2.validate().unwrap();
        assert_eq!(ctx2.central_series(SeriesStrategy::Superdiagonal).unwrap().dims(), vec![2, 1]);
        assert_eq!(ctx2.central_series(SeriesStrategy::Refined).unwrap().dims(), vec![1, 1, 1]);
    }

    #[test]
    fn refined_splits_under_torus() {
        // a diagonal torus preserves every coordinate flag
        let f5 = f(5);
        let spec = heisenberg_fp_spec(5, &[&[1, 2, 4]]);
        let ctx = spec.validate().unwrap();
        let r = ctx.central_series(SeriesStrategy::Refined).unwrap();
        assert_eq!(r.dims(), vec![1, 1, 1]);
        let d = diag(f5, &[1, 2, 4]);
        for j in 0..r.len() {
            let a = r.layer_action(&d, j).unwrap().matrix;
            assert_eq!(a.rows(), 1);
        }
    }

    #[test]
    fn homomorphism_on_generator_pairs() {
        for spec in [g5_spec(), heisenberg_fp_spec(5, &[&[1, 2, 4]]), heisenberg_fp_spec(7, &[&[3, 1, 5]])] {
            let ctx = spec.validate().unwrap();
            for strategy in [SeriesStrategy::Superdiagonal, SeriesStrategy::Refined] {
                let s = ctx.central_series(strategy).unwrap();
                for j in 0..s.len() {
                    for g in ctx.generators() {
                        for h in ctx.generators() {
                            let gh = s.layer_action(&(g * h), j).unwrap().matrix;
                            let prod = &s.layer_action(g, j).unwrap().matrix * &s.layer_action(h, j).unwrap().matrix;
                            assert_eq!(gh, prod);
                        }
                    }
                }
            }
        }
    }
}
