//! Validated group contexts: upper-triangular generators, the unipotent part
//! `N` (the kernel of the diagonal map), and its central series.
//!
//! Over a prime field the whole group is enumerated once and `N` is read off
//! as the unitriangular elements. Over the rationals `N` is supplied as a
//! nilpotent Lie algebra and handled through `exp`/`log`.

mod lie;
mod series;

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::abelian_quotient::LatticeQuotient;
use crate::exactalg::{AlgebraError, Field, FieldScalar, Matrix, Subspace};

pub use lie::{exp_nilpotent, log_unipotent};
pub use series::{CentralSeries, Layer, LayerAction, SeriesStrategy};

/// Default bound on the number of enumerated group elements.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("generator {index} has shape {rows}x{cols}, expected {dim}x{dim}")]
    WrongShape { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("generator {index} is over {found}, expected {expected}")]
    WrongField { index: usize, found: Field, expected: Field },
    #[error("generator {0} is not upper-triangular")]
    NotUpperTriangular(usize),
    #[error("generator {0} is singular")]
    Singular(usize),
    #[error("a spec over Q must supply the Lie algebra of its unipotent part")]
    MissingLieAlgebra,
    #[error("a Lie algebra basis is only accepted over Q; prime-field groups are enumerated")]
    LieAlgebraOverPrimeField,
    #[error("Lie algebra element {0} is not strictly upper-triangular")]
    LieElementNotNilpotent(usize),
    #[error("Lie algebra is not closed under the bracket ([X{0}, X{1}] leaves the span)")]
    LieNotClosed(usize, usize),
    #[error("conjugation by generator {generator} moves Lie algebra element {element} out of the span")]
    LieNotInvariant { generator: usize, element: usize },
    #[error("commutator of generators {0} and {1} is not in the unipotent part")]
    CommutatorOutsideN(usize, usize),
    #[error("a word with trivial diagonal ({0}) is not in the unipotent part")]
    RelationOutsideN(String),
    #[error("group enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("matrix is not strictly upper-triangular")]
    NotStrictlyUpperTriangular,
    #[error("matrix is not unitriangular")]
    NotUnipotent,
    #[error("{what} needs characteristic 0 or p > {dim}, got p = {characteristic}")]
    UnsupportedCharacteristic { characteristic: u64, dim: usize, what: String },
    #[error("series strategy {0} is not available for this group: {1}")]
    StrategyUnavailable(SeriesStrategy, String),
    #[error("layer index {0} out of range")]
    NoSuchLayer(usize),
    #[error("element does not lie in the expected layer: {0}")]
    NotInLayer(String),
    #[error("element is not in the group")]
    NotInGroup,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Raw, unvalidated description of a triangular group.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub field: Field,
    pub dim: usize,
    pub generators: Vec<Matrix>,
    /// Basis of the Lie algebra of `N`; required over Q, rejected over F_p.
    pub lie_algebra: Option<Vec<Matrix>>,
    /// Enumeration cap over F_p; `DEFAULT_CAP` when absent.
    pub cap: Option<usize>,
}

/// The diagonal of a group element, i.e. its image in `A = G/N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagClass(pub Vec<FieldScalar>);

impl DiagClass {
    pub fn identity(field: Field, dim: usize) -> DiagClass {
        DiagClass(vec![field.one(); dim])
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(FieldScalar::is_one)
    }

    pub fn mul(&self, other: &DiagClass) -> DiagClass {
        DiagClass(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn pow(&self, k: i64) -> DiagClass {
        DiagClass(self.0.iter().map(|a| a.pow(k)).collect())
    }

    /// Lexicographic comparison of the entries.
    pub fn canonical_cmp(&self, other: &DiagClass) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.canonical_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for DiagClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub enum UnipotentPart {
    /// Over Q: `N = exp(span(basis))`.
    Lie { basis: Vec<Matrix>, span: Subspace },
    /// Over F_p: the unitriangular elements of the enumerated group.
    Enumerated { elements: Vec<Matrix>, members: HashSet<Matrix> },
}

/// A validated group context.
#[derive(Clone, Debug)]
pub struct TriangularGroup {
    field: Field,
    dim: usize,
    generators: Vec<Matrix>,
    unipotent: UnipotentPart,
    elements: Option<Vec<Matrix>>,
    element_index: HashMap<Matrix, usize>,
    lattice: Option<LatticeQuotient>,
    cap: usize,
}

/// Strictly-upper positions ordered by superdiagonal, then by row.
pub fn strict_upper_positions(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|d| (0..n - d).map(move |i| (i, i + d))).collect()
}

pub(crate) fn flatten_strict_upper(m: &Matrix) -> Vec<FieldScalar> {
    strict_upper_positions(m.rows()).into_iter().map(|(i, j)| m.get(i, j).clone()).collect()
}

pub(crate) fn unflatten_strict_upper(field: Field, n: usize, v: &[FieldScalar]) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for ((i, j), x) in strict_upper_positions(n).into_iter().zip(v) {
        m.set(i, j, x.clone());
    }
    m
}

/// Inverse of an invertible upper-triangular matrix (always exists for group elements).
pub(crate) fn inv(m: &Matrix) -> Matrix {
    m.inverse().expect("square").expect("group elements are invertible")
}

impl GroupSpec {
    pub fn validate(&self) -> Result<TriangularGroup, GroupError> {
        validate_spec(self)
    }
}

/// Checks every hypothesis the decision procedures rely on and builds the context.
pub fn validate_spec(spec: &GroupSpec) -> Result<TriangularGroup, GroupError> {
    let n = spec.dim;
    if n == 0 {
        return Err(GroupError::EmptyDimension);
    }
    for (index, g) in spec.generators.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(GroupError::WrongShape { index, rows: g.rows(), cols: g.cols(), dim: n });
        }
        if g.field() != spec.field {
            return Err(GroupError::WrongField { index, found: g.field(), expected: spec.field });
        }
        if !g.is_upper_triangular() {
            return Err(GroupError::NotUpperTriangular(index));
        }
        if g.diagonal().iter().any(FieldScalar::is_zero) {
            return Err(GroupError::Singular(index));
        }
    }
    let cap = spec.cap.unwrap_or(DEFAULT_CAP);
    match spec.field {
        Field::Prime(_) => {
            if spec.lie_algebra.is_some() {
                return Err(GroupError::LieAlgebraOverPrimeField);
            }
            let elements = enumerate_closure(spec.field, n, &spec.generators, cap)?;
            let element_index: HashMap<Matrix, usize> =
                elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let unip: Vec<Matrix> = elements.iter().filter(|m| m.is_unitriangular()).cloned().collect();
            let members = unip.iter().cloned().collect();
            Ok(TriangularGroup {
                field: spec.field,
                dim: n,
                generators: spec.generators.clone(),
                unipotent: UnipotentPart::Enumerated { elements: unip, members },
                elements: Some(elements),
                element_index,
                lattice: None,
                cap,
            })
        }
        Field::Rational => {
            let basis = spec.lie_algebra.clone().ok_or(GroupError::MissingLieAlgebra)?;
            let span = validate_lie_algebra(spec, &basis)?;
            let lattice = LatticeQuotient::new(n, &spec.generators)?;
            let ctx = TriangularGroup {
                field: spec.field,
                dim: n,
                generators: spec.generators.clone(),
                unipotent: UnipotentPart::Lie { basis, span },
                elements: None,
                element_index: HashMap::new(),
                lattice: Some(lattice),
                cap,
            };
            ctx.validate_rational_quotient()?;
            Ok(ctx)
        }
    }
}

fn validate_lie_algebra(spec: &GroupSpec, basis: &[Matrix]) -> Result<Subspace, GroupError> {
    let n = spec.dim;
    let field = spec.field;
    for (i, x) in basis.iter().enumerate() {
        if x.rows() != n || x.cols() != n || x.field() != field || !x.is_strictly_upper_triangular() {
            return Err(GroupError::LieElementNotNilpotent(i));
        }
    }
    let ambient = n * (n - 1) / 2;
    let span = Subspace::from_spanning(field, ambient, basis.iter().map(flatten_strict_upper).collect())?;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate().skip(i + 1) {
            if !span.contains(&flatten_strict_upper(&x.bracket(y)?)) {
                return Err(GroupError::LieNotClosed(i, j));
            }
        }
    }
    for (gi, g) in spec.generators.iter().enumerate() {
        let g_inv = inv(g);
        for (xi, x) in basis.iter().enumerate() {
            let c = &(g * x) * &g_inv;
            if !span.contains(&flatten_strict_upper(&c)) {
                return Err(GroupError::LieNotInvariant { generator: gi, element: xi });
            }
        }
    }
    Ok(span)
}

/// Breadth-first closure under right multiplication by the generators.
fn enumerate_closure(field: Field, n: usize, generators: &[Matrix], cap: usize) -> Result<Vec<Matrix>, GroupError> {
    let id = Matrix::identity(field, n);
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in generators {
            let next = &m * g;
            if seen.insert(next.clone()) {
                if order.len() >= cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

impl TriangularGroup {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn unipotent(&self) -> &UnipotentPart {
        &self.unipotent
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.field, self.dim)
    }

    /// Whole group in breadth-first order (prime fields only).
    pub fn elements(&self) -> Option<&[Matrix]> {
        self.elements.as_deref()
    }

    pub(crate) fn lattice(&self) -> Option<&LatticeQuotient> {
        self.lattice.as_ref()
    }

    /// Image of `g` in `A = G/N`: its diagonal.
    pub fn diag_class(&self, g: &Matrix) -> DiagClass {
        DiagClass(g.diagonal())
    }

    /// Order of `N` over a prime field.
    pub fn unipotent_order(&self) -> Option<usize> {
        match &self.unipotent {
            UnipotentPart::Enumerated { elements, .. } => Some(elements.len()),
            UnipotentPart::Lie { .. } => None,
        }
    }

    /// Strictly upper-triangular basis of the Lie algebra of `N` (over Q).
    pub fn lie_basis(&self) -> Option<&[Matrix]> {
        match &self.unipotent {
            UnipotentPart::Lie { basis, .. } => Some(basis),
            UnipotentPart::Enumerated { .. } => None,
        }
    }

    pub fn unipotent_membership(&self, m: &Matrix) -> bool {
        if m.field() != self.field || m.rows() != self.dim || m.cols() != self.dim || !m.is_unitriangular() {
            return false;
        }
        match &self.unipotent {
            UnipotentPart::Enumerated { members, .. } => members.contains(m),
            UnipotentPart::Lie { span, .. } => match log_unipotent(m) {
                Ok(x) => span.contains(&flatten_strict_upper(&x)),
                Err(_) => false,
            },
        }
    }

    /// Membership in `G`.
    pub fn contains(&self, x: &Matrix) -> bool {
        if x.field() != self.field || x.rows() != self.dim || x.cols() != self.dim {
            return false;
        }
        if !self.element_index.is_empty() {
            return self.element_index.contains_key(x);
        }
        let Some(lattice) = &self.lattice else {
            return false;
        };
        if !x.is_upper_triangular() || x.diagonal().iter().any(FieldScalar::is_zero) {
            return false;
        }
        match lattice.representative(&self.diag_class(x)) {
            Ok(Some(rep)) => self.unipotent_membership(&(x * &inv(&rep))),
            _ => false,
        }
    }

    /// Over Q: commutators of generators and all diagonal relations must land in `N`.
    fn validate_rational_quotient(&self) -> Result<(), GroupError> {
        for (i, g) in self.generators.iter().enumerate() {
            for (j, h) in self.generators.iter().enumerate().skip(i + 1) {
                let c = &(&(g * h) * &inv(g)) * &inv(h);
                if !self.unipotent_membership(&c) {
                    return Err(GroupError::CommutatorOutsideN(i, j));
                }
            }
        }
        let lattice = self.lattice.as_ref().expect("rational context carries a lattice");
        for word in lattice.relation_generators() {
            let m = lattice.word_matrix(&word)?;
            if !self.unipotent_membership(&m) {
                let text: Vec<String> = word.iter().map(ToString::to_string).collect();
                return Err(GroupError::RelationOutsideN(format!("exponents [{}]", text.join(","))));
            }
        }
        Ok(())
    }

    /// Builds a central series of `N` with the requested strategy.
    pub fn central_series(&self, strategy: SeriesStrategy) -> Result<CentralSeries, GroupError> {
        CentralSeries::build(self, strategy)
    }
}
