//! Independent certificate checker.
//!
//! Uses only the exact-algebra layer and the spec file; group membership is
//! re-established by enumeration over F_p and by generator words plus a
//! matrix logarithm over Q, and the set of root classes is recomputed from
//! scratch (brute force over F_p, an integer Smith solve over Q).

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use powroot_core::exactalg::{Field, FieldScalar, IntMatrix, Matrix, Polynomial, Subspace};
use serde_json::Value;

use crate::cert::FORMAT;
use crate::specfile::{parse_matrix, parse_scalar, SpecFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    /// The file is not a certificate this checker understands.
    #[error("malformed certificate at {0}")]
    Malformed(String),
    /// A claim in the certificate is false.
    #[error("claim rejected: {0}")]
    Rejected(String),
}

fn malformed<T>(at: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Malformed(at.into()))
}

fn reject<T>(why: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Rejected(why.into()))
}

/// What was checked, one line per claim.
pub type Transcript = Vec<String>;

struct Reader<'a> {
    spec: &'a SpecFile,
}

impl Reader<'_> {
    fn get<'v>(&self, v: &'v Value, key: &str, at: &str) -> Result<&'v Value, VerifyError> {
        v.get(key).ok_or_else(|| VerifyError::Malformed(format!("{at}.{key}")))
    }

    fn matrix(&self, v: &Value, at: &str) -> Result<Matrix, VerifyError> {
        parse_matrix(self.spec.field, self.spec.dim, v, at).map_err(|e| VerifyError::Malformed(e.to_string()))
    }

    fn vector(&self, v: &Value, at: &str) -> Result<Vec<FieldScalar>, VerifyError> {
        let Value::Array(items) = v else {
            return malformed(at);
        };
        items
            .iter()
            .enumerate()
            .map(|(i, x)| parse_scalar(self.spec.field, x, &format!("{at}[{i}]")).map_err(|e| VerifyError::Malformed(e.to_string())))
            .collect()
    }

    fn list<'v>(&self, v: &'v Value, at: &str) -> Result<&'v [Value], VerifyError> {
        match v {
            Value::Array(a) => Ok(a),
            _ => malformed(at),
        }
    }

    fn usize(&self, v: &Value, at: &str) -> Result<usize, VerifyError> {
        v.as_u64().map(|x| x as usize).ok_or_else(|| VerifyError::Malformed(at.into()))
    }

    fn k(&self, v: &Value, at: &str) -> Result<u64, VerifyError> {
        v.as_str().and_then(|s| s.parse().ok()).filter(|&k| k >= 1).ok_or_else(|| VerifyError::Malformed(at.into()))
    }
}

fn inverse(m: &Matrix) -> Result<Matrix, VerifyError> {
    match m.inverse() {
        Ok(Some(i)) => Ok(i),
        _ => reject(format!("{m} is not invertible")),
    }
}

fn power(m: &Matrix, k: u64) -> Result<Matrix, VerifyError> {
    let mut out = Matrix::identity(m.field(), m.rows());
    for _ in 0..k {
        out = &out * m;
    }
    Ok(out)
}

/// `log(u) = Σ (-1)^{i+1} (u - I)^i / i` for unitriangular `u`.
fn log_unitriangular(u: &Matrix) -> Matrix {
    let n = u.rows();
    let field = u.field();
    let x = u - &Matrix::identity(field, n);
    let mut term = x.clone();
    let mut sum = Matrix::zeros(field, n, n);
    for i in 1..n.max(2) {
        let c = field.from_fraction(&BigInt::from(if i % 2 == 1 { 1 } else { -1 }), &BigInt::from(i)).expect("nonzero");
        sum = &sum + &term.scale(&c);
        term = &term * &x;
    }
    sum
}

fn strict_entries(m: &Matrix) -> Vec<FieldScalar> {
    let n = m.rows();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect()
}

/// Group membership, rebuilt from the spec file alone.
enum Membership {
    Finite(HashSet<Matrix>),
    Rational { lie: Subspace, lattice: Lattice },
}

impl Membership {
    fn build(spec: &SpecFile) -> Result<Membership, VerifyError> {
        match spec.field {
            Field::Prime(_) => {
                let cap = spec.cap.unwrap_or(1_000_000);
                let id = Matrix::identity(spec.field, spec.dim);
                let mut seen = HashSet::from([id.clone()]);
                let mut queue = VecDeque::from([id]);
                while let Some(m) = queue.pop_front() {
                    for g in &spec.generators {
                        let next = &m * g;
                        if seen.insert(next.clone()) {
                            if seen.len() > cap {
                                return malformed(format!("group exceeds the cap of {cap} elements"));
                            }
                            queue.push_back(next);
                        }
                    }
                }
                Ok(Membership::Finite(seen))
            }
            Field::Rational => {
                let Some(lie) = &spec.lie_algebra else {
                    return malformed("spec: a Q spec needs lie_algebra");
                };
                let ambient = spec.dim * (spec.dim - 1) / 2;
                let lie = Subspace::from_spanning(spec.field, ambient, lie.iter().map(strict_entries).collect())
                    .map_err(|e| VerifyError::Malformed(e.to_string()))?;
                Ok(Membership::Rational { lie, lattice: Lattice::new(spec)? })
            }
        }
    }

    fn in_n(&self, m: &Matrix) -> bool {
        if !m.is_unitriangular() {
            return false;
        }
        match self {
            Membership::Finite(all) => all.contains(m),
            Membership::Rational { lie, .. } => lie.contains(&strict_entries(&log_unitriangular(m))),
        }
    }

    /// Over Q a generator word for the representative must be supplied.
    fn in_g(&self, spec: &SpecFile, m: &Matrix, word: Option<&[BigInt]>) -> Result<bool, VerifyError> {
        match self {
            Membership::Finite(all) => Ok(all.contains(m)),
            Membership::Rational { .. } => {
                let Some(z) = word else {
                    return malformed("representative_word (needed over Q)");
                };
                let w = word_matrix(spec, z)?;
                if w.diagonal() != m.diagonal() {
                    return Ok(false);
                }
                Ok(self.in_n(&(m * &inverse(&w)?)))
            }
        }
    }

    fn classes_with_power(&self, spec: &SpecFile, a: &[FieldScalar], k: u64) -> Result<BTreeSet<Vec<String>>, VerifyError> {
        let key = |d: &[FieldScalar]| d.iter().map(ToString::to_string).collect::<Vec<_>>();
        match self {
            Membership::Finite(all) => {
                let mut out = BTreeSet::new();
                for g in all {
                    let d = g.diagonal();
                    if d.iter().map(|x| x.pow(k as i64)).collect::<Vec<_>>() == a {
                        out.insert(key(&d));
                    }
                }
                Ok(out)
            }
            Membership::Rational { lattice, .. } => {
                Ok(lattice.roots(spec.field, a, k).iter().map(|d| key(d)).collect())
            }
        }
    }
}

fn word_matrix(spec: &SpecFile, z: &[BigInt]) -> Result<Matrix, VerifyError> {
    if z.len() != spec.generators.len() {
        return malformed("representative_word length");
    }
    let mut m = Matrix::identity(spec.field, spec.dim);
    for (zi, g) in z.iter().zip(&spec.generators) {
        let e = zi.to_i64().ok_or_else(|| VerifyError::Malformed("exponent too large".into()))?;
        let base = if e < 0 { inverse(g)? } else { g.clone() };
        m = &m * &power(&base, e.unsigned_abs())?;
    }
    Ok(m)
}

/// Diagonal classes over Q as sign bits plus prime exponents.
struct Lattice {
    dim: usize,
    primes: Vec<BigInt>,
    exponents: IntMatrix,
    signs: Vec<Vec<u8>>,
}

fn prime_factors(mut n: BigInt, into: &mut BTreeSet<BigInt>) {
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            into.insert(p.clone());
            n /= &p;
        }
        p += 1;
    }
    if n > BigInt::one() {
        into.insert(n);
    }
}

impl Lattice {
    fn new(spec: &SpecFile) -> Result<Lattice, VerifyError> {
        let mut primes = BTreeSet::new();
        for g in &spec.generators {
            for d in g.diagonal() {
                let r = d.as_rational().ok_or_else(|| VerifyError::Malformed("rational entry".into()))?;
                if r.is_zero() {
                    return reject("singular generator");
                }
                prime_factors(r.numer().abs(), &mut primes);
                prime_factors(r.denom().abs(), &mut primes);
            }
        }
        let mut l = Lattice {
            dim: spec.dim,
            primes: primes.into_iter().collect(),
            exponents: IntMatrix::zeros(0, 0),
            signs: Vec::new(),
        };
        let cols: Vec<(Vec<BigInt>, Vec<u8>)> =
            spec.generators.iter().map(|g| l.encode(&g.diagonal()).expect("generator primes are listed")).collect();
        let rows = l.dim * l.primes.len();
        l.exponents = IntMatrix::zeros(rows, cols.len());
        for (j, (e, _)) in cols.iter().enumerate() {
            for (i, x) in e.iter().enumerate() {
                l.exponents.set(i, j, x.clone());
            }
        }
        l.signs = (0..l.dim).map(|pos| cols.iter().map(|(_, s)| s[pos]).collect()).collect();
        Ok(l)
    }

    fn encode(&self, d: &[FieldScalar]) -> Option<(Vec<BigInt>, Vec<u8>)> {
        let mut exps = Vec::new();
        let mut signs = Vec::new();
        for x in d {
            let r = x.as_rational()?;
            if r.is_zero() {
                return None;
            }
            signs.push(u8::from(r.is_negative()));
            let (mut num, mut den) = (r.numer().abs(), r.denom().abs());
            for p in &self.primes {
                let mut e = BigInt::zero();
                while (&num % p).is_zero() {
                    num /= p;
                    e += 1;
                }
                while (&den % p).is_zero() {
                    den /= p;
                    e -= 1;
                }
                exps.push(e);
            }
            if !num.is_one() || !den.is_one() {
                return None;
            }
        }
        Some((exps, signs))
    }

    fn decode(&self, field: Field, exps: &[BigInt], signs: &[u8]) -> Vec<FieldScalar> {
        (0..self.dim)
            .map(|pos| {
                let mut v = field.one();
                for (p, e) in self.primes.iter().zip(&exps[pos * self.primes.len()..]) {
                    let e = e.to_i64().expect("small exponent");
                    v = &v * &field.from_bigint(p).pow(e);
                }
                if signs[pos] == 1 {
                    v = &field.zero() - &v;
                }
                v
            })
            .collect()
    }

    fn sign_of(&self, z: &[BigInt]) -> Vec<u8> {
        self.signs
            .iter()
            .map(|row| {
                let s: BigInt = row.iter().zip(z).map(|(&b, zi)| BigInt::from(b) * zi).sum();
                u8::from(!(s % BigInt::from(2)).is_zero())
            })
            .collect()
    }

    /// Every lattice class `b` with `b^k = a`.
    fn roots(&self, field: Field, a: &[FieldScalar], k: u64) -> Vec<Vec<FieldScalar>> {
        let Some((ea, sa)) = self.encode(a) else {
            return Vec::new();
        };
        let mut kk = self.exponents.clone();
        for i in 0..kk.rows() {
            for j in 0..kk.cols() {
                let v = kk.get(i, j) * BigInt::from(k);
                kk.set(i, j, v);
            }
        }
        let Some(sol) = kk.solve_integer_system(&ea) else {
            return Vec::new();
        };
        let exps = self.exponents.mul_vec(&sol.particular);
        let base = self.sign_of(&sol.particular);
        // sign vectors reachable by adding kernel words, closed over F_2
        let mut reachable: BTreeSet<Vec<u8>> = BTreeSet::from([base]);
        for kv in &sol.kernel {
            let step = self.sign_of(kv);
            let more: Vec<Vec<u8>> = reachable.iter().map(|s| s.iter().zip(&step).map(|(a, b)| a ^ b).collect()).collect();
            reachable.extend(more);
        }
        reachable
            .into_iter()
            .filter(|s| s.iter().zip(&sa).all(|(&sb, &sa)| (u64::from(sb) * k) % 2 == u64::from(sa)))
            .map(|s| self.decode(field, &exps, &s))
            .collect()
    }
}

/// One layer frame as recorded in a certificate.
struct Frame {
    depth: usize,
    positions: Vec<(usize, usize)>,
    basis: Vec<Vec<FieldScalar>>,
    lo: usize,
    hi: usize,
    lifts: Vec<Matrix>,
}

impl Frame {
    fn read(r: &Reader, v: &Value, at: &str) -> Result<Frame, VerifyError> {
        let depth = r.usize(r.get(v, "depth", at)?, &format!("{at}.depth"))?;
        let mut positions = Vec::new();
        for (i, p) in r.list(r.get(v, "positions", at)?, at)?.iter().enumerate() {
            let pair = r.list(p, &format!("{at}.positions[{i}]"))?;
            if pair.len() != 2 {
                return malformed(format!("{at}.positions[{i}]"));
            }
            let (a, b) = (r.usize(&pair[0], at)?, r.usize(&pair[1], at)?);
            if a >= b || b >= r.spec.dim {
                return malformed(format!("{at}.positions[{i}]"));
            }
            positions.push((a, b));
        }
        let basis = r
            .list(r.get(v, "basis", at)?, at)?
            .iter()
            .enumerate()
            .map(|(i, b)| r.vector(b, &format!("{at}.basis[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let range = r.list(r.get(v, "range", at)?, at)?;
        let (lo, hi) = (r.usize(&range[0], at)?, r.usize(&range[1], at)?);
        if lo > hi || hi > basis.len() || basis.iter().any(|b| b.len() != positions.len()) {
            return malformed(format!("{at}: inconsistent basis and range"));
        }
        let lifts = r
            .list(r.get(v, "lifts", at)?, at)?
            .iter()
            .enumerate()
            .map(|(i, m)| r.matrix(m, &format!("{at}.lifts[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if lifts.len() != hi - lo {
            return malformed(format!("{at}.lifts"));
        }
        Ok(Frame { depth, positions, basis, lo, hi, lifts })
    }

    fn coordinates(&self, u: &Matrix) -> Option<Vec<FieldScalar>> {
        if !u.is_unitriangular() {
            return None;
        }
        let n = u.rows();
        for i in 0..n {
            for j in i + 1..n {
                if j - i < self.depth && !u.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        let field = u.field();
        let v: Vec<FieldScalar> = self.positions.iter().map(|&(i, j)| u.get(i, j).clone()).collect();
        let mut cols = Matrix::zeros(field, self.positions.len(), self.basis.len());
        for (c, b) in self.basis.iter().enumerate() {
            for (r, x) in b.iter().enumerate() {
                cols.set(r, c, x.clone());
            }
        }
        let c = cols.solve_linear(&v).ok()??;
        if c[..self.lo].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(c[self.lo..self.hi].to_vec())
    }

    /// The action of `g` on the layer, read off the recorded lifts.
    fn action(&self, g: &Matrix) -> Result<Matrix, VerifyError> {
        let field = g.field();
        let d = self.hi - self.lo;
        let gi = inverse(g)?;
        let mut m = Matrix::zeros(field, d, d);
        for (c, l) in self.lifts.iter().enumerate() {
            let Some(col) = self.coordinates(&(&(g * l) * &gi)) else {
                return reject("conjugate of a layer lift leaves the layer");
            };
            for (r, x) in col.into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        Ok(m)
    }

    fn check_lifts(&self, membership: &Membership) -> Result<(), VerifyError> {
        let field = self.basis.first().and_then(|b| b.first()).map(FieldScalar::field);
        for (r, l) in self.lifts.iter().enumerate() {
            if !membership.in_n(l) {
                return reject(format!("layer lift {r} is not in N"));
            }
            let mut e = vec![field.expect("nonempty basis").zero(); self.hi - self.lo];
            e[r] = e[r].field().one();
            if self.coordinates(l) != Some(e) {
                return reject(format!("layer lift {r} does not have unit coordinates"));
            }
        }
        Ok(())
    }
}

fn read_frames(r: &Reader, cert: &Value, membership: &Membership) -> Result<Vec<Frame>, VerifyError> {
    let frames = r
        .list(r.get(cert, "layers", "$")?, "$.layers")?
        .iter()
        .enumerate()
        .map(|(i, f)| Frame::read(r, f, &format!("$.layers[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    for f in &frames {
        f.check_lifts(membership)?;
    }
    Ok(frames)
}

fn read_word(v: &Value, at: &str) -> Result<Option<Vec<BigInt>>, VerifyError> {
    match v {
        Value::Null => Ok(None),
        Value::Array(items) => items
            .iter()
            .map(|x| x.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| VerifyError::Malformed(at.into())))
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
        _ => malformed(at),
    }
}

/// Checks a certificate against a spec. On success returns what was checked.
pub fn verify(spec: &SpecFile, cert: &Value) -> Result<Transcript, VerifyError> {
    let r = Reader { spec };
    if cert.get("format").and_then(Value::as_str) != Some(FORMAT) {
        return malformed("$.format");
    }
    if cert.get("field").and_then(Value::as_str) != Some(spec.field.to_string().as_str()) {
        return reject("certificate field differs from the spec file");
    }
    let membership = Membership::build(spec)?;
    let kind = r.get(cert, "kind", "$")?.as_str().unwrap_or_default();
    let query = r.get(cert, "query", "$")?;
    let x = r.matrix(r.get(query, "element", "$.query")?, "$.query.element")?;
    let mut log = vec![format!("group rebuilt from the spec file ({})", match &membership {
        Membership::Finite(all) => format!("{} elements", all.len()),
        Membership::Rational { lie, .. } => format!("Lie span of dimension {}", lie.dim()),
    })];
    match kind {
        "coset-decision" | "root" => verify_decision(&r, cert, &x, &membership, &mut log)?,
        "regularity" => verify_regularity(&r, cert, &x, &membership, &mut log)?,
        "element-probe" => verify_probe(&r, cert, &x, &membership, &mut log)?,
        other => return malformed(format!("$.kind = {other:?}")),
    }
    Ok(log)
}

fn verify_decision(r: &Reader, cert: &Value, x: &Matrix, membership: &Membership, log: &mut Transcript) -> Result<(), VerifyError> {
    let spec = r.spec;
    let k = r.k(r.get(r.get(cert, "query", "$")?, "k", "$.query")?, "$.query.k")?;
    if let Field::Prime(p) = spec.field {
        if k % p == 0 {
            return reject(format!("k = {k} is not coprime to {p}"));
        }
    }
    let a = r.vector(r.get(cert, "class", "$")?, "$.class")?;
    if a != x.diagonal() {
        return reject("class is not the diagonal of the element");
    }
    let roots = r
        .list(r.get(cert, "roots", "$")?, "$.roots")?
        .iter()
        .enumerate()
        .map(|(i, b)| r.vector(b, &format!("$.roots[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let key = |d: &[FieldScalar]| d.iter().map(ToString::to_string).collect::<Vec<_>>();
    let claimed: BTreeSet<Vec<String>> = roots.iter().map(|b| key(b)).collect();
    let recomputed = membership.classes_with_power(spec, &a, k)?;
    if claimed != recomputed || claimed.len() != roots.len() {
        return reject(format!("root classes: certificate lists {claimed:?}, recomputed {recomputed:?}"));
    }
    log.push(format!("root classes recomputed independently: {} classes", roots.len()));
    let frames = read_frames(r, cert, membership)?;
    log.push(format!("{} layer frames: lifts lie in N with unit coordinates", frames.len()));

    let decision = r.get(cert, "decision", "$")?.as_bool().ok_or_else(|| VerifyError::Malformed("$.decision".into()))?;
    let witness = r.get(cert, "witness", "$")?;
    let obstruction = r.get(cert, "obstruction", "$")?;
    match (decision, witness.is_null(), obstruction.is_null()) {
        (true, false, true) => {
            let y = r.matrix(r.get(witness, "root", "$.witness")?, "$.witness.root")?;
            let b = r.vector(r.get(witness, "class", "$.witness")?, "$.witness.class")?;
            if !claimed.contains(&key(&b)) || y.diagonal() != b {
                return reject("witness class");
            }
            if power(&y, k)? != *x {
                return reject("root^k differs from the element");
            }
            if r.matrix(r.get(witness, "root_power", "$.witness")?, "$.witness.root_power")? != *x {
                return reject("recorded root power");
            }
            let word = read_word(r.get(witness, "representative_word", "$.witness")?, "$.witness.representative_word")?;
            let rep = r.matrix(r.get(witness, "representative", "$.witness")?, "$.witness.representative")?;
            if let Some(z) = &word {
                if word_matrix(spec, z)? != rep {
                    return reject("representative differs from its word");
                }
            }
            if !membership.in_g(spec, &y, word.as_deref())? {
                return reject("root is not in the group");
            }
            log.push(format!("witness: root of class {:?} in G with root^{k} = element", key(&b)));
        }
        (false, true, false) => {
            let kind = r.get(obstruction, "kind", "$.obstruction")?.as_str().unwrap_or_default();
            match kind {
                "empty-root-set" => {
                    if !roots.is_empty() {
                        return reject("root set is not empty");
                    }
                    log.push("no class b with b^k = a".into());
                }
                "layers" => {
                    let items = r.list(r.get(obstruction, "items", "$.obstruction")?, "$.obstruction.items")?;
                    if items.len() != roots.len() || roots.is_empty() {
                        return reject("obstructions must cover every root class");
                    }
                    for (i, (item, b)) in items.iter().zip(&roots).enumerate() {
                        let at = format!("$.obstruction.items[{i}]");
                        let cb = r.vector(r.get(item, "class", &at)?, &at)?;
                        if cb != *b {
                            return reject(format!("{at}: class out of order"));
                        }
                        let rep = r.matrix(r.get(item, "representative", &at)?, &at)?;
                        let word = read_word(r.get(item, "representative_word", &at)?, &at)?;
                        if rep.diagonal() != *b || !membership.in_g(spec, &rep, word.as_deref())? {
                            return reject(format!("{at}: representative"));
                        }
                        let j = r.usize(r.get(item, "layer", &at)?, &at)?;
                        let frame = frames.get(j).ok_or_else(|| VerifyError::Malformed(format!("{at}.layer")))?;
                        let v = r.vector(r.get(item, "vector", &at)?, &at)?;
                        let lift = r.matrix(r.get(item, "vector_lift", &at)?, &at)?;
                        if !membership.in_n(&lift) || frame.coordinates(&lift).as_deref() != Some(&v[..]) {
                            return reject(format!("{at}: vector lift"));
                        }
                        let by_a = frame.coordinates(&(&(x * &lift) * &inverse(x)?));
                        let by_b = frame.coordinates(&(&(&rep * &lift) * &inverse(&rep)?));
                        if by_a.as_deref() != Some(&v[..]) {
                            return reject(format!("{at}: vector is not fixed by the element"));
                        }
                        if by_b.as_deref() == Some(&v[..]) {
                            return reject(format!("{at}: vector is fixed by the root class"));
                        }
                        log.push(format!("class {:?}: layer {j} vector fixed by a, moved by b", key(b)));
                    }
                }
                other => return malformed(format!("$.obstruction.kind = {other:?}")),
            }
        }
        _ => return reject("decision, witness and obstruction are inconsistent"),
    }
    Ok(())
}

fn verify_regularity(r: &Reader, cert: &Value, g: &Matrix, membership: &Membership, log: &mut Transcript) -> Result<(), VerifyError> {
    let spec = r.spec;
    let k = r.k(r.get(r.get(cert, "query", "$")?, "k", "$.query")?, "$.query.k")?;
    let frames = read_frames(r, cert, membership)?;
    let layers = r.list(r.get(cert, "regularity", "$")?, "$.regularity")?;
    if layers.len() != frames.len() {
        return malformed("$.regularity length");
    }
    let cyclo = Polynomial::geometric(spec.field, k);
    let mut regular = true;
    for (j, (item, frame)) in layers.iter().zip(&frames).enumerate() {
        let at = format!("$.regularity[{j}]");
        let action = frame.action(g)?;
        if r.matrix_any(r.get(item, "action", &at)?, &at)? != action {
            return reject(format!("{at}: action matrix"));
        }
        let cp = action.char_poly().map_err(|e| VerifyError::Malformed(e.to_string()))?;
        let gcd = cp.gcd(&cyclo).map_err(|e| VerifyError::Malformed(e.to_string()))?;
        if r.vector(r.get(item, "char_poly", &at)?, &at)? != cp.coeffs() || r.vector(r.get(item, "gcd", &at)?, &at)? != gcd.coeffs() {
            return reject(format!("{at}: characteristic polynomial or gcd"));
        }
        regular &= gcd.is_constant();
    }
    if r.get(cert, "regular", "$")?.as_bool() != Some(regular) {
        return reject("regularity verdict");
    }
    log.push(format!("{} layer actions, characteristic polynomials and gcds recomputed", frames.len()));
    Ok(())
}

fn verify_probe(r: &Reader, cert: &Value, x: &Matrix, membership: &Membership, log: &mut Transcript) -> Result<(), VerifyError> {
    for (i, item) in r.list(r.get(cert, "results", "$")?, "$.results")?.iter().enumerate() {
        let at = format!("$.results[{i}]");
        let k = r.k(r.get(item, "k", &at)?, &at)?;
        match r.get(item, "result", &at)?.as_str() {
            Some("root") => {
                let y = r.matrix(r.get(item, "root", &at)?, &at)?;
                if power(&y, k)? != *x {
                    return reject(format!("{at}: root^k differs from the element"));
                }
                if let Membership::Finite(all) = membership {
                    if !all.contains(&y) {
                        return reject(format!("{at}: root is not in the group"));
                    }
                }
                log.push(format!("k = {k}: root rechecked"));
            }
            Some("no-root") => match membership {
                Membership::Finite(all) => {
                    if all.iter().any(|y| power(y, k).ok().as_ref() == Some(x)) {
                        return reject(format!("{at}: a root exists"));
                    }
                    log.push(format!("k = {k}: no root, by exhaustion"));
                }
                Membership::Rational { .. } => log.push(format!("k = {k}: no-root claim over Q is not rechecked")),
            },
            Some("undecided") => log.push(format!("k = {k}: undecided")),
            _ => return malformed(format!("{at}.result")),
        }
    }
    Ok(())
}

impl Reader<'_> {
    /// A square matrix of any size over the field of the spec file.
    fn matrix_any(&self, v: &Value, at: &str) -> Result<Matrix, VerifyError> {
        let rows = self.list(v, at)?;
        let data = rows
            .iter()
            .enumerate()
            .map(|(i, row)| self.vector(row, &format!("{at}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(self.spec.field, data).map_err(|e| VerifyError::Malformed(format!("{at}: {e}")))
    }
}
