//! The abelian quotient `A = G/N`, realized on diagonals.
//!
//! Over a prime field `A` is a finite group of diagonal vectors, enumerated
//! by breadth-first search over the generators. Over the rationals each
//! diagonal is encoded as a sign vector plus prime exponents, which turns
//! `b^k = a` into an integer linear system.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::{Field, FieldScalar, IntMatrix, Matrix, Subspace};
use crate::group_ctx::{DiagClass, GroupError, TriangularGroup};

#[derive(Clone, Debug)]
pub enum AbelianQuotient {
    Finite(FiniteQuotient),
    Lattice(LatticeQuotient),
}

/// Enumerated diagonal classes with a generator word for each.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    classes: Vec<DiagClass>,
    representatives: Vec<Matrix>,
    words: Vec<Vec<usize>>,
    index: HashMap<DiagClass, usize>,
}

/// Diagonal classes over Q in sign-and-exponent coordinates.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    dim: usize,
    generators: Vec<Matrix>,
    primes: Vec<BigInt>,
    /// Column `i` holds the prime exponents of generator `i`, position-major.
    exponents: IntMatrix,
    /// `signs[pos][i]` is 1 when generator `i` has a negative entry at `pos`.
    signs: Vec<Vec<u8>>,
}

/// The classes `b` with `b^k = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub a: DiagClass,
    pub k: u64,
    pub roots: Vec<DiagClass>,
    /// Rank over F_2 of the sign torsion met by the solutions (lattice mode).
    pub torsion_rank: usize,
}

impl RootSet {
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl AbelianQuotient {
    pub fn build(ctx: &TriangularGroup) -> Result<AbelianQuotient, GroupError> {
        match ctx.field() {
            Field::Prime(_) => Ok(AbelianQuotient::Finite(FiniteQuotient::build(ctx))),
            Field::Rational => Ok(AbelianQuotient::Lattice(
                ctx.lattice().cloned().expect("rational contexts carry a lattice"),
            )),
        }
    }

    pub fn project(&self, g: &Matrix) -> DiagClass {
        DiagClass(g.diagonal())
    }

    pub fn contains_class(&self, c: &DiagClass) -> bool {
        match self {
            AbelianQuotient::Finite(f) => f.index.contains_key(c),
            AbelianQuotient::Lattice(l) => l.solve_word(c).is_some(),
        }
    }

    /// All classes, when there are finitely many.
    pub fn classes(&self) -> Option<Vec<DiagClass>> {
        match self {
            AbelianQuotient::Finite(f) => Some(f.classes.clone()),
            AbelianQuotient::Lattice(l) => l.torsion_classes(),
        }
    }

    pub fn kth_root_classes(&self, a: &DiagClass, k: u64) -> Result<RootSet, GroupError> {
        if k == 0 {
            return Err(GroupError::Unsupported("k must be at least 1".into()));
        }
        match self {
            AbelianQuotient::Finite(f) => {
                let mut roots: Vec<DiagClass> =
                    f.classes.iter().filter(|b| b.pow(k as i64) == *a).cloned().collect();
                roots.sort_by(|x, y| x.canonical_cmp(y));
                Ok(RootSet { a: a.clone(), k, roots, torsion_rank: 0 })
            }
            AbelianQuotient::Lattice(l) => l.kth_roots(a, k),
        }
    }

    /// A deterministic representative of class `b`.
    pub fn lift_class(&self, b: &DiagClass) -> Result<Matrix, GroupError> {
        match self {
            AbelianQuotient::Finite(f) => {
                f.index.get(b).map(|&i| f.representatives[i].clone()).ok_or(GroupError::NotInGroup)
            }
            AbelianQuotient::Lattice(l) => l.representative(b)?.ok_or(GroupError::NotInGroup),
        }
    }
}

impl FiniteQuotient {
    fn build(ctx: &TriangularGroup) -> FiniteQuotient {
        let id = ctx.identity();
        let start = DiagClass(id.diagonal());
        let mut q = FiniteQuotient {
            classes: vec![start.clone()],
            representatives: vec![id],
            words: vec![Vec::new()],
            index: HashMap::from([(start, 0)]),
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in ctx.generators().iter().enumerate() {
                let next = DiagClass(q.classes[i].0.iter().zip(g.diagonal()).map(|(a, b)| a * &b).collect());
                if q.index.contains_key(&next) {
                    continue;
                }
                let rep = &q.representatives[i] * g;
                let mut word = q.words[i].clone();
                word.push(gi);
                q.index.insert(next.clone(), q.classes.len());
                queue.push_back(q.classes.len());
                q.classes.push(next);
                q.representatives.push(rep);
                q.words.push(word);
            }
        }
        q
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    /// Generator indices whose product (left to right) is the representative.
    pub fn word(&self, c: &DiagClass) -> Option<&[usize]> {
        self.index.get(c).map(|&i| self.words[i].as_slice())
    }
}

/// Prime factorization by trial division; `n` must be positive.
fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn rational(x: &FieldScalar) -> &BigRational {
    x.as_rational().expect("lattice quotients live over Q")
}

fn f2() -> Field {
    Field::prime(2).expect("2 is prime")
}

fn f2_vec(bits: &[u8]) -> Vec<FieldScalar> {
    let f = f2();
    bits.iter().map(|&b| f.from_i64(b as i64)).collect()
}

fn parity(x: &BigInt) -> u8 {
    if x.is_odd() {
        1
    } else {
        0
    }
}

impl LatticeQuotient {
    pub fn new(dim: usize, generators: &[Matrix]) -> Result<LatticeQuotient, GroupError> {
        let mut primes: Vec<BigInt> = Vec::new();
        for g in generators {
            for x in g.diagonal() {
                let r = rational(&x);
                for part in [r.numer().abs(), r.denom().clone()] {
                    for (p, _) in factor(&part) {
                        if !primes.contains(&p) {
                            primes.push(p);
                        }
                    }
                }
            }
        }
        primes.sort();
        let mut q = LatticeQuotient {
            dim,
            generators: generators.to_vec(),
            exponents: IntMatrix::zeros(dim * primes.len(), generators.len()),
            signs: vec![vec![0; generators.len()]; dim],
            primes,
        };
        for (gi, g) in generators.iter().enumerate() {
            let (e, s) = q.encode(&DiagClass(g.diagonal())).expect("generator primes are in the table");
            for (row, v) in e.into_iter().enumerate() {
                q.exponents.set(row, gi, v);
            }
            for (pos, bit) in s.into_iter().enumerate() {
                q.signs[pos][gi] = bit;
            }
        }
        Ok(q)
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    /// Exponent vector (position-major over the prime table) and sign bits,
    /// or `None` when an entry involves a prime outside the table.
    pub fn encode(&self, c: &DiagClass) -> Option<(Vec<BigInt>, Vec<u8>)> {
        if c.0.len() != self.dim {
            return None;
        }
        let mut exps = Vec::with_capacity(self.dim * self.primes.len());
        let mut signs = Vec::with_capacity(self.dim);
        for x in &c.0 {
            let r = x.as_rational()?;
            if r.is_zero() {
                return None;
            }
            signs.push(u8::from(r.is_negative()));
            let mut num = r.numer().abs();
            let mut den = r.denom().clone();
            for p in &self.primes {
                let mut e = 0i64;
                while num.is_multiple_of(p) {
                    num /= p;
                    e += 1;
                }
                while den.is_multiple_of(p) {
                    den /= p;
                    e -= 1;
                }
                exps.push(BigInt::from(e));
            }
            if !num.is_one() || !den.is_one() {
                return None;
            }
        }
        Some((exps, signs))
    }

    pub fn decode(&self, exps: &[BigInt], signs: &[u8]) -> DiagClass {
        let q = Field::Rational;
        let np = self.primes.len();
        let entries = (0..self.dim)
            .map(|pos| {
                let mut r = BigRational::one();
                for (pi, p) in self.primes.iter().enumerate() {
                    let e = exps[pos * np + pi].to_i32().expect("exponent fits in i32");
                    r *= num_traits::pow::Pow::pow(BigRational::from_integer(p.clone()), e);
                }
                if signs[pos] == 1 {
                    r = -r;
                }
                FieldScalar::Rational(r)
            })
            .collect::<Vec<_>>();
        debug_assert!(entries.iter().all(|x| x.field() == q));
        DiagClass(entries)
    }

    fn sign_matrix(&self, cols: &[Vec<BigInt>]) -> Matrix {
        let f = f2();
        let mut m = Matrix::zeros(f, self.dim, cols.len());
        for pos in 0..self.dim {
            for (c, col) in cols.iter().enumerate() {
                let s: BigInt = col.iter().zip(&self.signs[pos]).map(|(z, &b)| z * BigInt::from(b)).sum();
                m.set(pos, c, f.from_i64(parity(&s) as i64));
            }
        }
        m
    }

    fn signs_of(&self, z: &[BigInt]) -> Vec<u8> {
        (0..self.dim)
            .map(|pos| {
                let s: BigInt = z.iter().zip(&self.signs[pos]).map(|(z, &b)| z * BigInt::from(b)).sum();
                parity(&s)
            })
            .collect()
    }

    fn kernel(&self) -> Vec<Vec<BigInt>> {
        let zero = vec![BigInt::zero(); self.exponents.rows()];
        self.exponents.solve_integer_system(&zero).expect("homogeneous systems are solvable").kernel
    }

    /// Exponents `z` with `prod g_i^{z_i}` in class `c`.
    pub fn solve_word(&self, c: &DiagClass) -> Option<Vec<BigInt>> {
        let (e, s) = self.encode(c)?;
        let sol = self.exponents.solve_integer_system(&e)?;
        let base = self.signs_of(&sol.particular);
        let rhs: Vec<u8> = base.iter().zip(&s).map(|(a, b)| a ^ b).collect();
        let sl = self.sign_matrix(&sol.kernel);
        let t = sl.solve_linear(&f2_vec(&rhs)).expect("shapes agree")?;
        let mut z = sol.particular.clone();
        for (ti, l) in t.iter().zip(&sol.kernel) {
            if ti.is_one() {
                for (zi, li) in z.iter_mut().zip(l) {
                    *zi += li;
                }
            }
        }
        Some(z)
    }

    pub fn word_matrix(&self, z: &[BigInt]) -> Result<Matrix, GroupError> {
        let mut m = Matrix::identity(Field::Rational, self.dim);
        for (zi, g) in z.iter().zip(&self.generators) {
            let e = zi.to_i64().ok_or_else(|| GroupError::Unsupported(format!("exponent {zi} too large")))?;
            if e != 0 {
                m = &m * &g.pow(e)?;
            }
        }
        Ok(m)
    }

    pub fn representative(&self, c: &DiagClass) -> Result<Option<Matrix>, GroupError> {
        match self.solve_word(c) {
            Some(z) => self.word_matrix(&z).map(Some),
            None => Ok(None),
        }
    }

    /// Generators of the lattice of exponent vectors whose word has trivial diagonal.
    pub fn relation_generators(&self) -> Vec<Vec<BigInt>> {
        let kernel = self.kernel();
        let mut out: Vec<Vec<BigInt>> = kernel.iter().map(|l| l.iter().map(|x| x * 2).collect()).collect();
        let sl = self.sign_matrix(&kernel);
        for c in sl.kernel_basis().basis() {
            let mut z = vec![BigInt::zero(); self.generators.len()];
            for (ci, l) in c.iter().zip(&kernel) {
                if ci.is_one() {
                    for (zi, li) in z.iter_mut().zip(l) {
                        *zi += li;
                    }
                }
            }
            out.push(z);
        }
        out
    }

    /// The classes, when the exponent lattice is trivial (only signs vary).
    fn torsion_classes(&self) -> Option<Vec<DiagClass>> {
        if (0..self.exponents.rows()).any(|i| (0..self.exponents.cols()).any(|j| !self.exponents.get(i, j).is_zero())) {
            return None;
        }
        let cols: Vec<Vec<BigInt>> = (0..self.generators.len())
            .map(|i| (0..self.generators.len()).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        let span = Subspace::image_of(&self.sign_matrix(&cols));
        let zeros = vec![BigInt::zero(); self.exponents.rows()];
        Some(span_elements(&span, self.dim).iter().map(|s| self.decode(&zeros, s)).collect())
    }

    fn kth_roots(&self, a: &DiagClass, k: u64) -> Result<RootSet, GroupError> {
        let empty = RootSet { a: a.clone(), k, roots: Vec::new(), torsion_rank: 0 };
        let Some((ea, sa)) = self.encode(a) else {
            return Ok(empty);
        };
        let mut scaled = self.exponents.clone();
        for i in 0..scaled.rows() {
            for j in 0..scaled.cols() {
                let v = scaled.get(i, j) * BigInt::from(k);
                scaled.set(i, j, v);
            }
        }
        let Some(sol) = scaled.solve_integer_system(&ea) else {
            return Ok(empty);
        };
        let eb = self.exponents.mul_vec(&sol.particular);
        let base = self.signs_of(&sol.particular);
        let torsion = Subspace::image_of(&self.sign_matrix(&sol.kernel));
        let mut roots: Vec<(Vec<u8>, DiagClass)> = Vec::new();
        for t in span_elements(&torsion, self.dim) {
            let s: Vec<u8> = base.iter().zip(&t).map(|(x, y)| x ^ y).collect();
            let ok = if k % 2 == 1 { s == sa } else { sa.iter().all(|&b| b == 0) };
            if ok {
                roots.push((s.clone(), self.decode(&eb, &s)));
            }
        }
        roots.sort_by(|x, y| x.0.cmp(&y.0));
        roots.dedup_by(|x, y| x.0 == y.0);
        Ok(RootSet { a: a.clone(), k, roots: roots.into_iter().map(|r| r.1).collect(), torsion_rank: torsion.dim() })
    }
}

/// Every vector of an F_2 subspace, as bits.
fn span_elements(span: &Subspace, dim: usize) -> Vec<Vec<u8>> {
    let basis = span.basis();
    (0u64..1 << basis.len())
        .map(|mask| {
            let mut v = vec![0u8; dim];
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi ^= u8::from(bi.is_one());
                    }
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ctx::GroupSpec;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn class(field: Field, v: &[i64]) -> DiagClass {
        DiagClass(v.iter().map(|&x| field.from_i64(x)).collect())
    }

    fn g5() -> TriangularGroup {
        let f = f5();
        GroupSpec {
            field: f,
            dim: 3,
            generators: vec![
                Matrix::from_i64(f, &[&[4, 0, 0], &[0, 2, 0], &[0, 0, 1]]),
                Matrix::from_i64(f, &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]),
                Matrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
            ],
            lie_algebra: None,
            cap: None,
        }
        .validate()
        .unwrap()
    }

    fn rational_diag(entries: &[&[i64]]) -> TriangularGroup {
        let q = Field::Rational;
        let gens = entries
            .iter()
            .map(|d| Matrix::diagonal_matrix(q, &d.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>()))
            .collect();
        GroupSpec { field: q, dim: entries[0].len(), generators: gens, lie_algebra: Some(vec![]), cap: None }
            .validate()
            .unwrap()
    }

    #[test]
    fn g5_quotient_is_cyclic_of_order_4() {
        let ctx = g5();
        let AbelianQuotient::Finite(f) = AbelianQuotient::build(&ctx).unwrap() else { panic!() };
        assert_eq!(f.order(), 4);
        assert_eq!(f.word(&class(f5(), &[1, 4, 1])), Some(&[0usize, 0][..]));
    }

    #[test]
    fn g5_square_roots() {
        let ctx = g5();
        let q = AbelianQuotient::build(&ctx).unwrap();
        let a = class(f5(), &[1, 4, 1]);
        let b = q.kth_root_classes(&a, 2).unwrap();
        assert_eq!(b.roots, vec![class(f5(), &[4, 2, 1]), class(f5(), &[4, 3, 1])]);
        assert_eq!(q.kth_root_classes(&a, 1).unwrap().roots, vec![a.clone()]);
        let g = &ctx.generators()[0];
        assert_eq!(q.lift_class(&class(f5(), &[4, 2, 1])).unwrap(), g.clone());
        assert_eq!(q.lift_class(&a).unwrap(), g * g);
        assert_eq!(q.lift_class(&class(f5(), &[1, 1, 1])).unwrap(), ctx.identity());
        assert!(q.lift_class(&class(f5(), &[2, 2, 1])).is_err());
    }

    #[test]
    fn lattice_6_10() {
        let ctx = rational_diag(&[&[6], &[10]]);
        let AbelianQuotient::Lattice(l) = AbelianQuotient::build(&ctx).unwrap() else { panic!() };
        assert_eq!(l.primes(), &[BigInt::from(2), BigInt::from(3), BigInt::from(5)]);
        assert_eq!(l.exponents, IntMatrix::from_i64(&[&[1, 1], &[1, 0], &[0, 1]]));
        let q = AbelianQuotient::Lattice(l);
        let r = q.kth_root_classes(&class(Field::Rational, &[360]), 2).unwrap();
        assert!(r.is_empty());
        let r = q.kth_root_classes(&class(Field::Rational, &[3600]), 2).unwrap();
        assert_eq!(r.roots, vec![class(Field::Rational, &[60])]);
        let b = class(Field::Rational, &[60]);
        assert_eq!(q.project(&q.lift_class(&b).unwrap()), b);
    }

    #[test]
    fn lattice_sign_torsion() {
        // <diag(-1, 1), diag(4, 1)>: 16 has the square roots 4 and -4
        let ctx = rational_diag(&[&[-1, 1], &[4, 1]]);
        let q = AbelianQuotient::build(&ctx).unwrap();
        let r = q.kth_root_classes(&class(Field::Rational, &[16, 1]), 2).unwrap();
        assert_eq!(r.roots, vec![class(Field::Rational, &[4, 1]), class(Field::Rational, &[-4, 1])]);
        assert_eq!(r.torsion_rank, 1);
        // -4 has no square root, odd roots keep the sign
        assert!(q.kth_root_classes(&class(Field::Rational, &[-4, 1]), 2).unwrap().is_empty());
        assert_eq!(
            q.kth_root_classes(&class(Field::Rational, &[-64, 1]), 3).unwrap().roots,
            vec![class(Field::Rational, &[-4, 1])]
        );
        assert!(q.classes().is_none());
        let torsion_only = rational_diag(&[&[-1, -1]]);
        let tq = AbelianQuotient::build(&torsion_only).unwrap();
        assert_eq!(tq.classes().unwrap().len(), 2);
    }

    #[test]
    fn trivial_quotient() {
        let q = Field::Rational;
        let ctx = GroupSpec { field: q, dim: 2, generators: vec![], lie_algebra: Some(vec![]), cap: None }
            .validate()
            .unwrap();
        let aq = AbelianQuotient::build(&ctx).unwrap();
        let e = class(q, &[1, 1]);
        assert_eq!(aq.classes().unwrap(), vec![e.clone()]);
        assert_eq!(aq.kth_root_classes(&e, 3).unwrap().roots, vec![e]);
    }

    #[test]
    fn factoring() {
        assert_eq!(
            factor(&BigInt::from(360)),
            vec![(BigInt::from(2), 3), (BigInt::from(3), 2), (BigInt::from(5), 1)]
        );
        assert!(factor(&BigInt::one()).is_empty());
    }
}
