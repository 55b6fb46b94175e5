//! Finite-dimensional algebras in structure-constant form.
//!
//! Every algebra carries a basis adapted to a complete set of primitive
//! orthogonal idempotents: each idempotent is itself a basis element and every
//! other basis element lies in a single Peirce block `e_v A e_w`. Paths are
//! composed left to right, so right modules are covariant representations.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Scalar, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: &[(usize, usize, &str)]) -> Quiver {
        Quiver {
            vertex_count,
            arrows: arrows
                .iter()
                .map(|&(src, tgt, l)| Arrow {
                    src,
                    tgt,
                    label: l.to_string(),
                })
                .collect(),
        }
    }

    /// Linearly oriented A_n: 0 -> 1 -> ... -> n-1.
    pub fn linear(n: usize) -> Quiver {
        let arrows = (0..n.saturating_sub(1))
            .map(|i| Arrow {
                src: i,
                tgt: i + 1,
                label: format!("a{}", i + 1),
            })
            .collect();
        Quiver {
            vertex_count: n,
            arrows,
        }
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertex_count: self.vertex_count,
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    src: a.tgt,
                    tgt: a.src,
                    label: a.label.clone(),
                })
                .collect(),
        }
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for a in &self.arrows {
            if a.src >= self.vertex_count || a.tgt >= self.vertex_count {
                return Err(Error::InvalidAlgebra(format!(
                    "arrow {} has a vertex out of range",
                    a.label
                )));
            }
            if !seen.insert(a.label.as_str()) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate arrow label {}",
                    a.label
                )));
            }
        }
        Ok(())
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count;
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.tgt] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.tgt] -= 1;
                if indeg[a.tgt] == 0 {
                    stack.push(a.tgt);
                }
            }
        }
        seen == n
    }

    /// All paths as arrow-index words, including the trivial path at each vertex
    /// (represented as `(v, [])`). Ordered by length, then lexicographically.
    pub fn paths(&self) -> Result<Vec<Path>> {
        self.validate()?;
        if !self.is_acyclic() {
            return Err(Error::CyclicQuiver);
        }
        let mut out: Vec<Path> = (0..self.vertex_count)
            .map(|v| Path {
                src: v,
                tgt: v,
                arrows: vec![],
            })
            .collect();
        let mut frontier: Vec<Path> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| Path {
                src: a.src,
                tgt: a.tgt,
                arrows: vec![i],
            })
            .collect();
        while !frontier.is_empty() {
            frontier.sort_by(|a, b| a.arrows.cmp(&b.arrows));
            let mut next = Vec::new();
            for p in &frontier {
                for (i, a) in self.arrows.iter().enumerate() {
                    if a.src == p.tgt {
                        let mut w = p.arrows.clone();
                        w.push(i);
                        next.push(Path {
                            src: p.src,
                            tgt: a.tgt,
                            arrows: w,
                        });
                    }
                }
            }
            out.append(&mut frontier);
            frontier = next;
        }
        Ok(out)
    }

    pub fn word_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e{}", p.src)
        } else {
            p.arrows
                .iter()
                .map(|&i| self.arrows[i].label.as_str())
                .collect::<Vec<_>>()
                .join("")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub src: usize,
    pub tgt: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.tgt == other.src).then(|| Path {
            src: self.src,
            tgt: other.tgt,
            arrows: self.arrows.iter().chain(&other.arrows).copied().collect(),
        })
    }
}

/// A rational linear combination of parallel paths, each a list of arrow labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiverPresentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

/// How an algebra was built; kept for module input and for class detection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Path,
    Bound,
    Replicated { m: usize },
    Opposite(Box<Origin>),
    Endomorphism,
    Raw,
}

/// Quiver data attached to path and bound quiver algebras: the arrow-word
/// of each basis element and the relations holding in the algebra.
#[derive(Clone, Debug)]
pub struct PathData {
    pub quiver: Quiver,
    pub words: Vec<Path>,
    pub relations: Vec<Relation>,
    /// Basis index of each arrow.
    pub arrow_basis: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    dim: usize,
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
    idempotents: Vec<usize>,
    peirce: Vec<(usize, usize)>,
    generators: Vec<usize>,
    origin: Origin,
    path_data: Option<PathData>,
    fingerprint: u64,
    opposite: OnceLock<Arc<Algebra>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        self.fingerprint == other.fingerprint
            && self.dim == other.dim
            && self.table == other.table
            && self.idempotents == other.idempotents
    }
}

fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl Algebra {
    /// Builds and validates an algebra from structure constants. `table[i*dim+j]`
    /// is the sparse expansion of `b_i b_j`.
    pub fn from_structure(
        labels: Vec<String>,
        table: Vec<Vec<(usize, Scalar)>>,
        idempotents: Vec<usize>,
        origin: Origin,
    ) -> Result<Algebra> {
        let a = Self::from_structure_unchecked(labels, table, idempotents, origin)?;
        let report = a.primitive_idempotent_check();
        if let Some(v) = report
            .violations
            .iter()
            .find(|v| !matches!(v, Violation::NotBasic(_)))
        {
            return Err(Error::InvalidAlgebra(format!("{v:?}")));
        }
        Ok(a)
    }

    /// As [`Self::from_structure`] but tolerates idempotent-axiom failures, which are
    /// reported by [`Self::primitive_idempotent_check`] instead.
    pub fn from_structure_unchecked(
        labels: Vec<String>,
        table: Vec<Vec<(usize, Scalar)>>,
        idempotents: Vec<usize>,
        origin: Origin,
    ) -> Result<Algebra> {
        let dim = labels.len();
        if table.len() != dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "structure table has {} entries, need {}",
                table.len(),
                dim * dim
            )));
        }
        if table.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::InvalidAlgebra(
                "structure constant index out of range".into(),
            ));
        }
        if idempotents.iter().any(|&e| e >= dim) {
            return Err(Error::InvalidAlgebra(
                "idempotent index out of range".into(),
            ));
        }
        let mut unit = vec![Scalar::zero(); dim];
        for &e in &idempotents {
            unit[e] += Scalar::one();
        }
        let mut a = Algebra {
            dim,
            labels,
            table,
            unit,
            idempotents,
            peirce: vec![],
            generators: vec![],
            origin,
            path_data: None,
            fingerprint: 0,
            opposite: OnceLock::new(),
        };
        a.peirce = (0..dim).map(|b| a.find_peirce(b)).collect();
        a.generators = a.compute_generators();
        a.fingerprint = a.compute_fingerprint();
        Ok(a)
    }

    fn find_peirce(&self, b: usize) -> (usize, usize) {
        let is_b = |v: &[(usize, Scalar)]| v.len() == 1 && v[0].0 == b && v[0].1.is_one();
        let left = self
            .idempotents
            .iter()
            .position(|&e| is_b(self.basis_product(e, b)));
        let right = self
            .idempotents
            .iter()
            .position(|&e| is_b(self.basis_product(b, e)));
        (left.unwrap_or(usize::MAX), right.unwrap_or(usize::MAX))
    }

    fn compute_generators(&self) -> Vec<usize> {
        let idem: HashSet<usize> = self.idempotents.iter().copied().collect();
        let others: Vec<usize> = (0..self.dim).filter(|b| !idem.contains(b)).collect();
        // The greedy choice is only valid when the non-idempotent basis spans a nilpotent ideal.
        let in_span = |v: &[(usize, Scalar)]| v.iter().all(|(k, _)| !idem.contains(k));
        let closed = others
            .iter()
            .all(|&i| others.iter().all(|&j| in_span(self.basis_product(i, j))))
            && self.idempotents.iter().all(|&e| {
                others.iter().all(|&j| {
                    in_span(self.basis_product(e, j)) && in_span(self.basis_product(j, e))
                })
            });
        if !closed || !self.span_is_nilpotent(&others) {
            return others;
        }
        let squares: Vec<Vec<Scalar>> = others
            .iter()
            .flat_map(|&i| others.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.product_vec(i, j))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let mut span = squares;
        let mut gens = Vec::new();
        for &b in &others {
            let sub = Subspace::span(self.dim, &span);
            let mut e = vec![Scalar::zero(); self.dim];
            e[b] = Scalar::one();
            if !sub.contains(&e) {
                gens.push(b);
                span.push(e);
            }
        }
        gens
    }

    fn span_is_nilpotent(&self, basis: &[usize]) -> bool {
        let mut power: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|&b| {
                let mut e = vec![Scalar::zero(); self.dim];
                e[b] = Scalar::one();
                e
            })
            .collect();
        for _ in 0..=self.dim {
            if power.is_empty() {
                return true;
            }
            let prods: Vec<Vec<Scalar>> = power
                .iter()
                .flat_map(|x| basis.iter().map(move |&b| (x, b)))
                .map(|(x, b)| {
                    let mut e = vec![Scalar::zero(); self.dim];
                    e[b] = Scalar::one();
                    self.mul(x, &e)
                })
                .filter(|v| v.iter().any(|x| !x.is_zero()))
                .collect();
            if prods.is_empty() {
                return true;
            }
            power = linalg::row_space(&Mat::from_rows(self.dim, prods)).row_vecs();
        }
        false
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dim.hash(&mut h);
        self.table.hash(&mut h);
        self.idempotents.hash(&mut h);
        h.finish()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn vertex_count(&self) -> usize {
        self.idempotents.len()
    }

    pub fn peirce(&self, b: usize) -> (usize, usize) {
        self.peirce[b]
    }

    /// Non-idempotent basis elements that together with the idempotents generate the algebra.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn path_data(&self) -> Option<&PathData> {
        self.path_data.as_ref()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        self == other
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim + j]
    }

    pub fn product_vec(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn table(&self) -> &[Vec<(usize, Scalar)>] {
        &self.table
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Basis elements of `e_v A`, sorted by right idempotent.
    pub fn left_block(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.dim).filter(|&b| self.peirce[b].0 == v).collect();
        out.sort_by_key(|&b| (self.peirce[b].1, b));
        out
    }

    /// Basis elements of `e_v A e_w`.
    pub fn peirce_block(&self, v: usize, w: usize) -> Vec<usize> {
        (0..self.dim)
            .filter(|&b| self.peirce[b] == (v, w))
            .collect()
    }

    pub fn is_associative(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ij = self.product_vec(i, j);
                for k in 0..d {
                    let mut ek = vec![Scalar::zero(); d];
                    ek[k] = Scalar::one();
                    let left = self.mul(&ij, &ek);
                    let jk = self.product_vec(j, k);
                    let mut ei = vec![Scalar::zero(); d];
                    ei[i] = Scalar::one();
                    if left != self.mul(&ei, &jk) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn unit_is_identity(&self) -> bool {
        (0..self.dim).all(|b| {
            let mut e = vec![Scalar::zero(); self.dim];
            e[b] = Scalar::one();
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        })
    }

    /// Jacobson radical as the kernel of the trace form `(x, y) -> tr(L_{xy})`.
    /// Valid in characteristic zero.
    pub fn jacobson_radical(&self) -> Vec<Vec<Scalar>> {
        let d = self.dim;
        let traces: Vec<Scalar> = (0..d)
            .map(|k| {
                (0..d).fold(Scalar::zero(), |acc, l| {
                    let c = self
                        .basis_product(k, l)
                        .iter()
                        .find(|(i, _)| *i == l)
                        .map(|(_, c)| c.clone());
                    acc + c.unwrap_or_else(Scalar::zero)
                })
            })
            .collect();
        let mut form = Mat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                form[(i, j)] = self
                    .basis_product(i, j)
                    .iter()
                    .fold(Scalar::zero(), |acc, (k, c)| acc + c * &traces[*k]);
            }
        }
        linalg::left_kernel_basis(&form)
    }

    pub fn primitive_idempotent_check(&self) -> IdempotentReport {
        let mut violations = Vec::new();
        let n = self.idempotents.len();
        let mut seen = HashSet::new();
        for (v, &e) in self.idempotents.iter().enumerate() {
            if !seen.insert(e) {
                violations.push(Violation::OverlappingIdempotents(v));
            }
        }
        for (v, &e) in self.idempotents.iter().enumerate() {
            for (w, &f) in self.idempotents.iter().enumerate() {
                let p = self.basis_product(e, f);
                let ok = if v == w {
                    p.len() == 1 && p[0].0 == e && p[0].1.is_one()
                } else {
                    p.is_empty()
                };
                if !ok && !(v != w && e == f) {
                    violations.push(if v == w {
                        Violation::NotIdempotent(v)
                    } else {
                        Violation::NotOrthogonal(v, w)
                    });
                }
            }
        }
        if !self.unit_is_identity() {
            violations.push(Violation::UnitMismatch);
        }
        for b in 0..self.dim {
            let (l, r) = self.peirce[b];
            if l >= n || r >= n {
                violations.push(Violation::NotInPeirceBlock(b));
            }
        }
        if violations.is_empty() {
            let rad = self.jacobson_radical();
            for v in 0..n {
                let block = self.peirce_block(v, v);
                let restricted: Vec<Vec<Scalar>> = rad
                    .iter()
                    .map(|x| block.iter().map(|&b| x[b].clone()).collect())
                    .collect();
                let rad_dim = if restricted.is_empty() {
                    0
                } else {
                    linalg::rank(&Mat::from_rows(block.len(), restricted))
                };
                if block.len() - rad_dim != 1 {
                    violations.push(Violation::NotBasic(v));
                }
            }
        }
        IdempotentReport { violations }
    }

    pub fn opposite(&self) -> Algebra {
        let d = self.dim;
        let table = (0..d * d)
            .map(|ij| self.table[(ij % d) * d + ij / d].clone())
            .collect();
        let origin = match &self.origin {
            Origin::Opposite(inner) => (**inner).clone(),
            o => Origin::Opposite(Box::new(o.clone())),
        };
        let mut a = Algebra::from_structure_unchecked(
            self.labels.clone(),
            table,
            self.idempotents.clone(),
            origin,
        )
        .expect("opposite of a valid algebra is valid");
        a.path_data = self.path_data.as_ref().map(|pd| PathData {
            quiver: pd.quiver.opposite(),
            words: pd
                .words
                .iter()
                .map(|p| Path {
                    src: p.tgt,
                    tgt: p.src,
                    arrows: p.arrows.iter().rev().copied().collect(),
                })
                .collect(),
            relations: pd
                .relations
                .iter()
                .map(|r| Relation {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, w)| (c.clone(), w.iter().rev().cloned().collect()))
                        .collect(),
                })
                .collect(),
            arrow_basis: pd.arrow_basis.clone(),
        });
        a
    }

    /// Shared handle to the opposite algebra, computed once.
    pub fn opposite_arc(&self) -> Arc<Algebra> {
        self.opposite
            .get_or_init(|| Arc::new(self.opposite()))
            .clone()
    }

    pub fn is_hereditary_path_algebra(&self) -> bool {
        matches!(self.origin, Origin::Path)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    OverlappingIdempotents(usize),
    NotIdempotent(usize),
    NotOrthogonal(usize, usize),
    UnitMismatch,
    NotInPeirceBlock(usize),
    /// `e_v A e_v` modulo the radical is not one-dimensional.
    NotBasic(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub violations: Vec<Violation>,
}

impl IdempotentReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn build_path_algebra(q: &Quiver) -> Result<Algebra> {
    build_bound_quiver_algebra(&BoundQuiverPresentation {
        quiver: q.clone(),
        relations: vec![],
    })
}

fn relation_vector(
    q: &Quiver,
    index: &HashMap<Path, usize>,
    npaths: usize,
    r: &Relation,
) -> Result<(Vec<Scalar>, usize, usize)> {
    let mut v = vec![Scalar::zero(); npaths];
    let mut ends: Option<(usize, usize)> = None;
    for (c, word) in &r.terms {
        if word.len() < 2 {
            return Err(Error::InadmissibleRelation(format!(
                "term {word:?} has length < 2"
            )));
        }
        let arrows: Vec<usize> = word
            .iter()
            .map(|l| {
                q.arrow_index(l)
                    .ok_or_else(|| Error::InadmissibleRelation(format!("unknown arrow {l}")))
            })
            .collect::<Result<_>>()?;
        let src = q.arrows[arrows[0]].src;
        let tgt = q.arrows[*arrows.last().unwrap()].tgt;
        let p = Path { src, tgt, arrows };
        let k = *index.get(&p).ok_or_else(|| {
            Error::InadmissibleRelation(format!("{word:?} is not a composable path"))
        })?;
        match ends {
            None => ends = Some((src, tgt)),
            Some(e) if e != (src, tgt) => {
                return Err(Error::InadmissibleRelation(
                    "terms are not parallel paths".into(),
                ))
            }
            _ => {}
        }
        v[k] += c;
    }
    let (s, t) = ends.ok_or_else(|| Error::InadmissibleRelation("empty relation".into()))?;
    Ok((v, s, t))
}

pub fn build_bound_quiver_algebra(p: &BoundQuiverPresentation) -> Result<Algebra> {
    let q = &p.quiver;
    let paths = q.paths()?;
    let n = paths.len();
    let index: HashMap<Path, usize> = paths
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();

    // Two-sided ideal generated by the relations, as a span of path vectors.
    let mut ideal = Vec::new();
    for r in &p.relations {
        let (v, s, t) = relation_vector(q, &index, n, r)?;
        for u in paths.iter().filter(|u| u.tgt == s) {
            for w in paths.iter().filter(|w| w.src == t) {
                let mut x = vec![Scalar::zero(); n];
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let full = u
                        .concat(&paths[k])
                        .and_then(|uk| uk.concat(w))
                        .expect("composable");
                    x[index[&full]] += c;
                }
                if x.iter().any(|c| !c.is_zero()) {
                    ideal.push(x);
                }
            }
        }
    }

    // Order columns longest path first so that leading terms are long paths and
    // the surviving standard paths include every arrow and trivial path.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(paths[i].len()), i));
    let permute = |v: &[Scalar]| -> Vec<Scalar> { order.iter().map(|&i| v[i].clone()).collect() };
    let permuted: Vec<Vec<Scalar>> = ideal.iter().map(|v| permute(v)).collect();
    let sub = Subspace::span(n, &permuted);
    let pivot_paths: HashSet<usize> = sub.pivots().iter().map(|&c| order[c]).collect();
    let basis: Vec<usize> = (0..n).filter(|i| !pivot_paths.contains(i)).collect();
    let basis_pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let reduce = |path_idx: usize| -> Vec<(usize, Scalar)> {
        let mut e = vec![Scalar::zero(); n];
        e[path_idx] = Scalar::one();
        let red = sub.reduce(&permute(&e));
        let mut out = Vec::new();
        for (c, x) in red.iter().enumerate() {
            if !x.is_zero() {
                out.push((basis_pos[&order[c]], x.clone()));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out
    };

    let d = basis.len();
    let mut table = Vec::with_capacity(d * d);
    for &i in &basis {
        for &j in &basis {
            table.push(match paths[i].concat(&paths[j]) {
                Some(p) => reduce(index[&p]),
                None => vec![],
            });
        }
    }
    for &i in &basis {
        if paths[i].len() == 1 && pivot_paths.contains(&i) {
            unreachable!("arrows are never leading terms of admissible relations");
        }
    }
    let labels = basis.iter().map(|&i| q.word_label(&paths[i])).collect();
    let idempotents = (0..q.vertex_count).map(|v| basis_pos[&v]).collect();
    let origin = if p.relations.is_empty() {
        Origin::Path
    } else {
        Origin::Bound
    };
    let mut a = Algebra::from_structure(labels, table, idempotents, origin)?;
    let arrow_basis = (0..q.arrows.len())
        .map(|ai| {
            basis_pos[&index[&Path {
                src: q.arrows[ai].src,
                tgt: q.arrows[ai].tgt,
                arrows: vec![ai],
            }]]
        })
        .collect();
    a.path_data = Some(PathData {
        quiver: q.clone(),
        words: basis.iter().map(|&i| paths[i].clone()).collect(),
        relations: p.relations.clone(),
        arrow_basis,
    });
    Ok(a)
}

/// The `(m+1) x (m+1)` truncation of the repetitive algebra of a path algebra `h`:
/// diagonal copies `H_0..H_m` and dual bimodules `DH_i` linking `H_{i+1}` and `H_i`.
pub fn build_replicated_algebra(h: &Algebra, m: usize) -> Result<Algebra> {
    if !h.is_hereditary_path_algebra() {
        return Err(Error::NotHereditary);
    }
    let pd = h.path_data().ok_or(Error::NotHereditary)?;
    let words = &pd.words;
    let hd = h.dim();
    let nv = h.vertex_count();
    let word_index: HashMap<&Path, usize> = words.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // Basis: copies first (copy c, element i) -> c*hd + i, then duals (link c, path i) -> (m+1)*hd + c*hd + i.
    let diag = |c: usize, i: usize| c * hd + i;
    let dual = |c: usize, i: usize| (m + 1) * hd + c * hd + i;
    let d = (m + 1) * hd + m * hd;
    let mut table = vec![Vec::new(); d * d];
    let strip_suffix = |p: &Path, a: &Path| -> Option<usize> {
        if a.arrows.is_empty() {
            return (p.tgt == a.src).then(|| word_index[p]);
        }
        let (pl, al) = (p.arrows.len(), a.arrows.len());
        if al > pl || p.arrows[pl - al..] != a.arrows[..] {
            return None;
        }
        let rest = &p.arrows[..pl - al];
        let q = Path {
            src: p.src,
            tgt: a.src,
            arrows: rest.to_vec(),
        };
        word_index.get(&q).copied()
    };
    let strip_prefix = |p: &Path, b: &Path| -> Option<usize> {
        if b.arrows.is_empty() {
            return (p.src == b.src).then(|| word_index[p]);
        }
        let (pl, bl) = (p.arrows.len(), b.arrows.len());
        if bl > pl || p.arrows[..bl] != b.arrows[..] {
            return None;
        }
        let q = Path {
            src: b.tgt,
            tgt: p.tgt,
            arrows: p.arrows[bl..].to_vec(),
        };
        word_index.get(&q).copied()
    };
    for c in 0..=m {
        for i in 0..hd {
            for j in 0..hd {
                table[diag(c, i) * d + diag(c, j)] = h
                    .basis_product(i, j)
                    .iter()
                    .map(|(k, x)| (diag(c, *k), x.clone()))
                    .collect();
            }
        }
    }
    let one = Scalar::one();
    for c in 0..m {
        for p in 0..hd {
            for a in 0..hd {
                // H_{c+1} acting on the left of DH_c removes a suffix.
                if let Some(q) = strip_suffix(&words[p], &words[a]) {
                    table[diag(c + 1, a) * d + dual(c, p)] = vec![(dual(c, q), one.clone())];
                }
                // H_c acting on the right of DH_c removes a prefix.
                if let Some(q) = strip_prefix(&words[p], &words[a]) {
                    table[dual(c, p) * d + diag(c, a)] = vec![(dual(c, q), one.clone())];
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(d);
    for c in 0..=m {
        for i in 0..hd {
            labels.push(format!("{}@{}", h.labels()[i], c));
        }
    }
    for c in 0..m {
        for i in 0..hd {
            labels.push(format!("{}*@{}", h.labels()[i], c));
        }
    }
    let idempotents = (0..=m)
        .flat_map(|c| h.idempotents().iter().map(move |&e| diag(c, e)))
        .collect();
    let _ = nv;
    Algebra::from_structure(labels, table, idempotents, Origin::Replicated { m })
}

pub fn opposite_algebra(a: &Algebra) -> Algebra {
    a.opposite()
}

/// Builds an algebra from a dense structure tensor `c[i][j][k]`.
pub fn algebra_from_tensor(
    labels: Vec<String>,
    c: &[Vec<Vec<Scalar>>],
    idempotents: Vec<usize>,
) -> Result<Algebra> {
    let d = labels.len();
    let mut table = Vec::with_capacity(d * d);
    for row in c.iter().take(d) {
        for v in row.iter().take(d) {
            table.push(sparse(v));
        }
    }
    Algebra::from_structure(labels, table, idempotents, Origin::Raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn a3() -> Algebra {
        build_path_algebra(&Quiver::linear(3)).unwrap()
    }

    /// Independent path count: number of directed paths by dynamic programming.
    fn count_paths(q: &Quiver) -> usize {
        let n = q.vertex_count;
        // paths ending at v, computed by relaxing in topological order enough times.
        let mut total = 0;
        for s in 0..n {
            let mut reach = vec![0usize; n];
            reach[s] = 1;
            for _ in 0..n {
                let mut next = vec![0usize; n];
                next[s] = 1;
                for a in &q.arrows {
                    next[a.tgt] += reach[a.src];
                }
                reach = next;
            }
            total += reach.iter().sum::<usize>();
        }
        total
    }

    #[test]
    fn path_algebra_dimensions() {
        assert_eq!(build_path_algebra(&Quiver::linear(1)).unwrap().dim(), 1);
        assert_eq!(build_path_algebra(&Quiver::linear(2)).unwrap().dim(), 3);
        assert_eq!(a3().dim(), 6);
        let q = Quiver::new(
            4,
            &[
                (0, 1, "a"),
                (1, 3, "b"),
                (0, 2, "c"),
                (2, 3, "d"),
                (0, 3, "e"),
            ],
        );
        assert_eq!(build_path_algebra(&q).unwrap().dim(), count_paths(&q));
    }

    #[test]
    fn cyclic_quiver_rejected() {
        let q = Quiver::new(2, &[(0, 1, "a"), (1, 0, "b")]);
        assert_eq!(build_path_algebra(&q).unwrap_err(), Error::CyclicQuiver);
    }

    #[test]
    fn bound_algebras() {
        let zero = BoundQuiverPresentation {
            quiver: Quiver::linear(3),
            relations: vec![Relation {
                terms: vec![(int(1), vec!["a1".into(), "a2".into()])],
            }],
        };
        assert_eq!(build_bound_quiver_algebra(&zero).unwrap().dim(), 5);

        let square = Quiver::new(4, &[(0, 1, "a"), (1, 3, "b"), (0, 2, "c"), (2, 3, "d")]);
        let comm = BoundQuiverPresentation {
            quiver: square.clone(),
            relations: vec![Relation {
                terms: vec![
                    (int(1), vec!["a".into(), "b".into()]),
                    (int(-1), vec!["c".into(), "d".into()]),
                ],
            }],
        };
        let a = build_bound_quiver_algebra(&comm).unwrap();
        assert_eq!(count_paths(&square), 10);
        assert_eq!(a.dim(), count_paths(&square) - 1);
        assert!(a.is_associative());

        let bad = BoundQuiverPresentation {
            quiver: Quiver::linear(3),
            relations: vec![Relation {
                terms: vec![(int(1), vec!["a1".into()])],
            }],
        };
        assert!(matches!(
            build_bound_quiver_algebra(&bad),
            Err(Error::InadmissibleRelation(_))
        ));
    }

    #[test]
    fn empty_relations_match_path_algebra() {
        let p = BoundQuiverPresentation {
            quiver: Quiver::linear(3),
            relations: vec![],
        };
        assert!(build_bound_quiver_algebra(&p).unwrap() == a3());
    }

    #[test]
    fn replicated_dimensions() {
        let a2 = build_path_algebra(&Quiver::linear(2)).unwrap();
        let r0 = build_replicated_algebra(&a2, 0).unwrap();
        assert_eq!(r0.table(), a2.table());
        let r1 = build_replicated_algebra(&a2, 1).unwrap();
        assert_eq!(r1.dim(), 9);
        assert!(r1.is_associative());
        let r = build_replicated_algebra(&a3(), 1).unwrap();
        assert_eq!(r.dim(), 2 * 6 + 6);
        assert!(r.is_associative());
        assert!(r.primitive_idempotent_check().passed());
        let bound = build_bound_quiver_algebra(&BoundQuiverPresentation {
            quiver: Quiver::linear(3),
            relations: vec![Relation {
                terms: vec![(int(1), vec!["a1".into(), "a2".into()])],
            }],
        })
        .unwrap();
        assert_eq!(
            build_replicated_algebra(&bound, 1).unwrap_err(),
            Error::NotHereditary
        );
    }

    #[test]
    fn opposite_is_involution() {
        let a = a3();
        assert!(a.opposite().opposite() == a);
    }

    #[test]
    fn opposite_of_a2_is_reversed_path_algebra() {
        let a = build_path_algebra(&Quiver::linear(2)).unwrap().opposite();
        let b = build_path_algebra(&Quiver::new(2, &[(1, 0, "a1")])).unwrap();
        // Relabel basis {e0, e1, a1} identically; the reversed quiver has the same path basis.
        let perm: Vec<usize> = (0..3)
            .map(|i| b.labels().iter().position(|l| *l == a.labels()[i]).unwrap())
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let lhs: Vec<(usize, Scalar)> = a
                    .basis_product(i, j)
                    .iter()
                    .map(|(k, c)| (perm[*k], c.clone()))
                    .collect();
                assert_eq!(lhs, b.basis_product(perm[i], perm[j]).to_vec());
            }
        }
    }

    #[test]
    fn radical_dimensions() {
        let k2 = algebra_from_tensor(
            vec!["e0".into(), "e1".into()],
            &[
                vec![vec![int(1), int(0)], vec![int(0), int(0)]],
                vec![vec![int(0), int(0)], vec![int(0), int(1)]],
            ],
            vec![0, 1],
        )
        .unwrap();
        assert!(k2.jacobson_radical().is_empty());
        assert_eq!(
            build_path_algebra(&Quiver::linear(2))
                .unwrap()
                .jacobson_radical()
                .len(),
            1
        );
        assert_eq!(a3().jacobson_radical().len(), 3);
    }

    #[test]
    fn radical_is_nilpotent() {
        let a =
            build_replicated_algebra(&build_path_algebra(&Quiver::linear(2)).unwrap(), 1).unwrap();
        let rad = a.jacobson_radical();
        let mut power = rad.clone();
        for _ in 0..a.dim() {
            let next: Vec<Vec<Scalar>> = power
                .iter()
                .flat_map(|x| rad.iter().map(move |y| (x, y)))
                .map(|(x, y)| a.mul(x, y))
                .filter(|v| v.iter().any(|c| !c.is_zero()))
                .collect();
            if next.is_empty() {
                return;
            }
            power = linalg::row_space(&Mat::from_rows(a.dim(), next)).row_vecs();
        }
        panic!("radical is not nilpotent");
    }

    #[test]
    fn overlapping_idempotents_reported() {
        let a = a3();
        let e = a.idempotents()[0];
        let bad = Algebra::from_structure_unchecked(
            a.labels().to_vec(),
            a.table().to_vec(),
            vec![e, e],
            Origin::Raw,
        )
        .unwrap();
        let rep = bad.primitive_idempotent_check();
        assert!(rep
            .violations
            .contains(&Violation::OverlappingIdempotents(1)));
        assert!(a.primitive_idempotent_check().passed());
    }

    #[test]
    fn generators_are_idempotents_and_arrows() {
        let a = a3();
        let labels: Vec<&str> = a
            .generators()
            .iter()
            .map(|&g| a.labels()[g].as_str())
            .collect();
        assert_eq!(labels, vec!["a1", "a2"]);
    }
}
