use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffpoly::{Field, FqElem, Poly};

/// Finite group with elements `0..order()`.
pub trait FiniteGroup: Sync {
    fn name(&self) -> String;
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    fn pow(&self, a: usize, e: i64) -> usize {
        let mut base = if e < 0 { self.inv(a) } else { a };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn elem_order(&self, a: usize) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `b⁻¹ a b`.
    fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.inv(b), self.mul(a, b))
    }
}

/// Cyclic group `ℤ/n` as residues.
#[derive(Clone, Debug)]
pub struct CyclicGroup(pub usize);

impl FiniteGroup for CyclicGroup {
    fn name(&self) -> String {
        format!("Z{}", self.0)
    }
    fn order(&self) -> usize {
        self.0
    }
    fn identity(&self) -> usize {
        0
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        (a + b) % self.0
    }
    fn inv(&self, a: usize) -> usize {
        (self.0 - a) % self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermKind {
    Symmetric,
    Alternating,
    Cyclic,
}

#[derive(Clone, Debug)]
pub enum Backend {
    /// Permutations of `0..degree`; `(ab)(i) = a(b(i))`.
    Perm { kind: PermKind, degree: usize },
    /// Row-major matrices of field codes; projective elements are stored as
    /// the lexicographically least scalar multiple.
    Matrix { ops: MatrixOps, special: bool, projective: bool },
}

/// Largest `|G|` for which a full Cayley table is built.
const TABLE_LIMIT: usize = 2896;

pub struct Group {
    name: String,
    backend: Backend,
    elems: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, u32>,
    inverses: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.elems.len())
    }
}

impl FiniteGroup for Group {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn order(&self) -> usize {
        self.elems.len()
    }
    fn identity(&self) -> usize {
        0
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elems.len() + b] as usize,
            None => {
                let raw = self.raw_mul(&self.elems[a], &self.elems[b]);
                self.index[&raw] as usize
            }
        }
    }
    fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }
}

impl Group {
    /// `"A5"`, `"S6"`, `"C5"`, `"SL2(7)"`, `"GL2(3)"`, `"PSL2(11)"`, `"SL3(2)"`.
    pub fn parse(spec: &str) -> Result<Group> {
        Group::parse_with_budget(spec, &Budget::from_env()?)
    }

    pub fn parse_with_budget(spec: &str, budget: &Budget) -> Result<Group> {
        let s = spec.trim();
        let bad = || Error::GroupSpec(spec.to_string());
        for (prefix, kind) in [("A", PermKind::Alternating), ("S", PermKind::Symmetric), ("C", PermKind::Cyclic)] {
            if let Some(rest) = s.strip_prefix(prefix) {
                if let Ok(n) = rest.parse::<usize>() {
                    return Group::permutation(kind, n, budget);
                }
            }
        }
        let (head, q) = s
            .strip_suffix(')')
            .and_then(|t| t.split_once('('))
            .ok_or_else(bad)?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        let (special, projective, n) = if let Some(n) = head.strip_prefix("PSL") {
            (true, true, n)
        } else if let Some(n) = head.strip_prefix("SL") {
            (true, false, n)
        } else if let Some(n) = head.strip_prefix("GL") {
            (false, false, n)
        } else {
            return Err(bad());
        };
        let n: usize = n.parse().map_err(|_| bad())?;
        let field = Field::of_order(q)?;
        Group::matrix(n, field, special, projective, budget)
    }

    pub fn permutation(kind: PermKind, degree: usize, budget: &Budget) -> Result<Group> {
        if degree == 0 || degree > 10 {
            return Err(Error::GroupSpec(format!("permutation degree {degree} outside 1..=10")));
        }
        let name = match kind {
            PermKind::Symmetric => format!("S{degree}"),
            PermKind::Alternating => format!("A{degree}"),
            PermKind::Cyclic => format!("C{degree}"),
        };
        let elems: Vec<Box<[u32]>> = match kind {
            PermKind::Cyclic => (0..degree)
                .map(|k| (0..degree).map(|i| ((i + k) % degree) as u32).collect())
                .collect(),
            _ => {
                let full: u128 = (1..=degree as u128).product();
                let size = if kind == PermKind::Alternating && degree > 1 { full / 2 } else { full };
                budget.check_elements(&format!("enumerating {name}"), size)?;
                let mut out = Vec::with_capacity(size as usize);
                let mut p: Vec<u32> = (0..degree as u32).collect();
                loop {
                    if kind == PermKind::Symmetric || is_even(&p) {
                        out.push(p.clone().into_boxed_slice());
                    }
                    if !next_permutation(&mut p) {
                        break;
                    }
                }
                out
            }
        };
        Group::build(name, Backend::Perm { kind, degree }, elems)
    }

    pub fn matrix(n: usize, field: Arc<Field>, special: bool, projective: bool, budget: &Budget) -> Result<Group> {
        if n == 0 || n > 3 {
            return Err(Error::GroupSpec(format!("matrix dimension {n} outside 1..=3")));
        }
        if projective && !special {
            return Err(Error::GroupSpec("only PSL quotients are supported".into()));
        }
        let q = field.order() as u64;
        let name = format!("{}{}({q})", if projective { "PSL" } else if special { "SL" } else { "GL" }, n);
        let ops = MatrixOps { n, field: field.clone() };
        let candidates = (q as u128).pow((n * n) as u32);
        budget.check_pairs(&format!("candidate matrices for {name}"), candidates)?;
        let mut size: u128 = (0..n as u32).map(|i| (q as u128).pow(n as u32) - (q as u128).pow(i)).product();
        if special {
            size /= q as u128 - 1;
        }
        let scalars = ops.central_scalars();
        if projective {
            size /= scalars.len() as u128;
        }
        budget.check_elements(&format!("enumerating {name}"), size)?;
        let one = FqElem::ONE;
        let mut elems = Vec::with_capacity(size as usize);
        let mut m = vec![0u32; n * n];
        loop {
            let det = ops.det(&m);
            let keep = if special { det == one } else { !det.is_zero() };
            if keep && (!projective || ops.canonical(&m, &scalars) == m) {
                elems.push(m.clone().into_boxed_slice());
            }
            if !odometer(&mut m, q as u32) {
                break;
            }
        }
        let backend = Backend::Matrix { ops, special, projective };
        Group::build(name, backend, elems)
    }

    fn build(name: String, backend: Backend, mut elems: Vec<Box<[u32]>>) -> Result<Group> {
        let id = identity_raw(&backend);
        let pos = elems.iter().position(|e| **e == *id).ok_or_else(|| Error::Invariant("identity missing".into()))?;
        elems.swap(0, pos);
        let index: HashMap<Box<[u32]>, u32> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut g = Group { name, backend, elems, index, inverses: Vec::new(), table: None };
        let order = g.elems.len();
        if order <= TABLE_LIMIT {
            use rayon::prelude::*;
            let rows: Vec<Vec<u32>> = (0..order)
                .into_par_iter()
                .map(|a| (0..order).map(|b| g.index[&g.raw_mul(&g.elems[a], &g.elems[b])]).collect())
                .collect();
            g.table = Some(rows.concat());
        }
        let inverses: Vec<u32> = (0..order).map(|a| g.index[&g.raw_inv(&g.elems[a])]).collect();
        g.inverses = inverses;
        Ok(g)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn element(&self, i: usize) -> &[u32] {
        &self.elems[i]
    }

    pub fn index_of(&self, raw: &[u32]) -> Option<usize> {
        let canon = match &self.backend {
            Backend::Matrix { ops, projective: true, .. } => ops.canonical(raw, &ops.central_scalars()),
            _ => raw.to_vec(),
        };
        self.index.get(canon.as_slice()).map(|&i| i as usize)
    }

    /// Index of the permutation `i ↦ images[i]`.
    pub fn perm(&self, images: &[u32]) -> Result<usize> {
        self.index_of(images)
            .ok_or_else(|| Error::InvalidArgument(format!("{images:?} is not an element of {}", self.name)))
    }

    /// Index of a matrix given by integer entries, row-major.
    pub fn matrix_element(&self, entries: &[i64]) -> Result<usize> {
        let ops = self.matrix_ops().ok_or(Error::NotMatrix)?;
        let raw: Vec<u32> = entries.iter().map(|&v| ops.field.from_int(v).0).collect();
        self.index_of(&raw)
            .ok_or_else(|| Error::InvalidArgument(format!("{entries:?} is not an element of {}", self.name)))
    }

    pub fn matrix_ops(&self) -> Option<&MatrixOps> {
        match &self.backend {
            Backend::Matrix { ops, .. } => Some(ops),
            _ => None,
        }
    }

    /// Matrix operations for a linear (non-projective) matrix backend.
    pub fn linear_ops(&self) -> Result<&MatrixOps> {
        match &self.backend {
            Backend::Matrix { ops, projective: false, .. } => Ok(ops),
            _ => Err(Error::NotMatrix),
        }
    }

    pub fn is_special_linear(&self) -> bool {
        matches!(self.backend, Backend::Matrix { special: true, projective: false, .. })
    }

    pub fn charpoly(&self, i: usize) -> Result<Poly> {
        Ok(self.linear_ops()?.charpoly(&self.elems[i]))
    }

    pub fn trace(&self, i: usize) -> Result<FqElem> {
        Ok(self.linear_ops()?.trace(&self.elems[i]))
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    fn raw_mul(&self, a: &[u32], b: &[u32]) -> Box<[u32]> {
        match &self.backend {
            Backend::Perm { .. } => b.iter().map(|&i| a[i as usize]).collect(),
            Backend::Matrix { ops, projective, .. } => {
                let m = ops.mul(a, b);
                if *projective {
                    ops.canonical(&m, &ops.central_scalars()).into_boxed_slice()
                } else {
                    m.into_boxed_slice()
                }
            }
        }
    }

    fn raw_inv(&self, a: &[u32]) -> Box<[u32]> {
        match &self.backend {
            Backend::Perm { .. } => {
                let mut out = vec![0u32; a.len()];
                for (i, &j) in a.iter().enumerate() {
                    out[j as usize] = i as u32;
                }
                out.into_boxed_slice()
            }
            Backend::Matrix { ops, projective, .. } => {
                let m = ops.inv(a).expect("group elements are invertible");
                if *projective {
                    ops.canonical(&m, &ops.central_scalars()).into_boxed_slice()
                } else {
                    m.into_boxed_slice()
                }
            }
        }
    }
}

fn identity_raw(backend: &Backend) -> Box<[u32]> {
    match backend {
        Backend::Perm { degree, .. } => (0..*degree as u32).collect(),
        Backend::Matrix { ops, .. } => ops.identity().into_boxed_slice(),
    }
}

fn is_even(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn odometer(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Arithmetic on `n × n` matrices over a field, stored row-major as codes.
#[derive(Clone, Debug)]
pub struct MatrixOps {
    pub n: usize,
    pub field: Arc<Field>,
}

impl MatrixOps {
    pub fn identity(&self) -> Vec<u32> {
        let n = self.n;
        (0..n * n).map(|i| u32::from(i / n == i % n)).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.n;
        let f = &self.field;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = FqElem(0);
                for k in 0..n {
                    acc = f.add(acc, f.mul(FqElem(a[i * n + k]), FqElem(b[k * n + j])));
                }
                out[i * n + j] = acc.0;
            }
        }
        out
    }

    pub fn scale(&self, a: &[u32], s: FqElem) -> Vec<u32> {
        a.iter().map(|&x| self.field.mul(FqElem(x), s).0).collect()
    }

    pub fn det(&self, a: &[u32]) -> FqElem {
        let f = &self.field;
        let e = |i: usize, j: usize| FqElem(a[i * self.n + j]);
        match self.n {
            1 => e(0, 0),
            2 => f.sub(f.mul(e(0, 0), e(1, 1)), f.mul(e(0, 1), e(1, 0))),
            _ => {
                let mut acc = FqElem(0);
                for (perm, odd) in PERMS3 {
                    let term = f.mul(f.mul(e(0, perm[0]), e(1, perm[1])), e(2, perm[2]));
                    acc = if odd { f.sub(acc, term) } else { f.add(acc, term) };
                }
                acc
            }
        }
    }

    pub fn trace(&self, a: &[u32]) -> FqElem {
        (0..self.n).fold(FqElem(0), |acc, i| self.field.add(acc, FqElem(a[i * self.n + i])))
    }

    /// Adjugate divided by the determinant.
    pub fn inv(&self, a: &[u32]) -> Option<Vec<u32>> {
        let f = &self.field;
        let n = self.n;
        let d = f.inv(self.det(a))?;
        let mut adj = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<u32> = (0..n)
                    .filter(|&r| r != j)
                    .flat_map(|r| (0..n).filter(move |&c| c != i).map(move |c| a[r * n + c]))
                    .collect();
                let m = if n == 1 {
                    FqElem::ONE
                } else {
                    MatrixOps { n: n - 1, field: f.clone() }.det(&minor)
                };
                let signed = if (i + j) % 2 == 1 { f.neg(m) } else { m };
                adj[i * n + j] = f.mul(signed, d).0;
            }
        }
        Some(adj)
    }

    /// `det(xI - A)`.
    pub fn charpoly(&self, a: &[u32]) -> Poly {
        let f = &self.field;
        let n = self.n;
        let entry = |i: usize, j: usize| {
            let c = FqElem(a[i * n + j]);
            if i == j {
                Poly::linear(f, c)
            } else {
                Poly::constant(f, f.neg(c))
            }
        };
        match n {
            1 => entry(0, 0),
            2 => entry(0, 0).mul(&entry(1, 1)).sub(&entry(0, 1).mul(&entry(1, 0))),
            _ => {
                let mut acc = Poly::zero(f);
                for (perm, odd) in PERMS3 {
                    let term = entry(0, perm[0]).mul(&entry(1, perm[1])).mul(&entry(2, perm[2]));
                    acc = if odd { acc.sub(&term) } else { acc.add(&term) };
                }
                acc
            }
        }
    }

    /// Scalars `λ` with `λⁿ = 1`, the center of `SL_n`.
    pub fn central_scalars(&self) -> Vec<FqElem> {
        self.field
            .elements()
            .filter(|&x| !x.is_zero() && self.field.pow(x, self.n as u64) == FqElem::ONE)
            .collect()
    }

    /// Lexicographically least member of `{λA : λ ∈ scalars}`.
    pub fn canonical(&self, a: &[u32], scalars: &[FqElem]) -> Vec<u32> {
        scalars.iter().map(|&s| self.scale(a, s)).min().unwrap_or_else(|| a.to_vec())
    }
}

const PERMS3: [([usize; 3], bool); 6] = [
    ([0, 1, 2], false),
    ([1, 2, 0], false),
    ([2, 0, 1], false),
    ([0, 2, 1], true),
    ([1, 0, 2], true),
    ([2, 1, 0], true),
];

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orders() {
        for (spec, order) in [
            ("A5", 60),
            ("S4", 24),
            ("C5", 5),
            ("A6", 360),
            ("SL2(3)", 24),
            ("SL2(5)", 120),
            ("GL2(3)", 48),
            ("PSL2(7)", 168),
            ("PSL2(9)", 360),
            ("SL3(2)", 168),
            ("SL2(4)", 60),
            ("PSL2(4)", 60),
        ] {
            assert_eq!(Group::parse(spec).unwrap().order(), order, "{spec}");
        }
        for q in [3usize, 5, 7, 8, 9] {
            assert_eq!(Group::parse(&format!("SL2({q})")).unwrap().order(), q * (q * q - 1));
        }
    }

    #[test]
    fn bad_specs() {
        for s in ["B5", "SL2(6)", "SL4(2)", "PSL2", "A11", "GL(3)"] {
            assert!(Group::parse(s).is_err(), "{s}");
        }
        let tiny = Budget { elements: 100, pair_ops: 1_000_000 };
        assert!(matches!(Group::parse_with_budget("A6", &tiny), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["A5", "S5", "SL2(5)", "PSL2(7)", "GL2(4)", "SL3(2)"] {
            let g = Group::parse(spec).unwrap();
            let n = g.order();
            for _ in 0..500 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                assert_eq!(g.mul(a, g.inv(a)), g.identity());
                assert_eq!(g.mul(g.identity(), a), a);
            }
        }
    }

    #[test]
    fn table_and_hash_paths_agree() {
        let g = Group::parse("SL2(5)").unwrap();
        assert!(g.has_table());
        for a in (0..g.order()).step_by(7) {
            for b in (0..g.order()).step_by(5) {
                let raw = g.raw_mul(g.element(a), g.element(b));
                assert_eq!(g.index_of(&raw), Some(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn charpoly_of_identity() {
        let g = Group::parse("SL3(2)").unwrap();
        let f = Field::of_order(2).unwrap();
        let expect = Poly::linear(&f, FqElem::ONE).pow(3);
        assert_eq!(g.charpoly(0).unwrap(), expect);
        assert!(Group::parse("PSL2(5)").unwrap().charpoly(0).is_err());
    }
}
