//! Finite-dimensional right modules stored in a basis adapted to the vertices.
//!
//! The basis of `M` is the concatenation of bases of `M e_v`. A basis element
//! `b` of `e_v A e_w` acts by a `dims[v] x dims[w]` block, with `m . b = m R(b)`
//! for row vectors `m`.

pub mod ar;
pub mod decompose;
pub mod hom;
pub mod morphism;
pub mod resolution;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar, Subspace};

pub use morphism::Morphism;

#[derive(Clone)]
pub struct Module {
    algebra: Arc<Algebra>,
    dims: Vec<usize>,
    action: Arc<Vec<Mat>>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.dims)
    }
}

pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn unit_row(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

impl Module {
    /// Builds a module from vertex-block action matrices and checks the module axioms.
    pub fn from_blocks(
        algebra: Arc<Algebra>,
        dims: Vec<usize>,
        action: Vec<Mat>,
    ) -> Result<Module> {
        let m = Module::from_blocks_unchecked(algebra, dims, action)?;
        m.validate()?;
        Ok(m)
    }

    /// Checks shapes only.
    pub fn from_blocks_unchecked(
        algebra: Arc<Algebra>,
        dims: Vec<usize>,
        action: Vec<Mat>,
    ) -> Result<Module> {
        if dims.len() != algebra.vertex_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} vertex dimensions for {} vertices",
                dims.len(),
                algebra.vertex_count()
            )));
        }
        if action.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} action matrices for algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        for (b, m) in action.iter().enumerate() {
            let (v, w) = algebra.peirce(b);
            if v >= dims.len() || w >= dims.len() {
                return Err(Error::InvalidAlgebra(format!(
                    "basis element {b} lies in no Peirce block"
                )));
            }
            if m.rows() != dims[v] || m.cols() != dims[w] {
                return Err(Error::ShapeMismatch(format!(
                    "action of {} is {}x{}, expected {}x{}",
                    algebra.labels()[b],
                    m.rows(),
                    m.cols(),
                    dims[v],
                    dims[w]
                )));
            }
        }
        Ok(Module {
            algebra,
            dims,
            action: Arc::new(action),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        for (v, &e) in a.idempotents().iter().enumerate() {
            if self.action[e] != Mat::identity(self.dims[v]) {
                return Err(Error::ShapeMismatch(format!(
                    "idempotent {v} does not act as the identity"
                )));
            }
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let (vi, wi) = a.peirce(i);
                let (vj, wj) = a.peirce(j);
                if wi != vj {
                    continue;
                }
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = Mat::zeros(self.dims[vi], self.dims[wj]);
                for (k, c) in a.basis_product(i, j) {
                    rhs.add_scaled(&self.action[*k], c);
                }
                if lhs != rhs {
                    return Err(Error::ShapeMismatch(format!(
                        "action is not multiplicative on {} * {}",
                        a.labels()[i],
                        a.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> Module {
        let n = algebra.vertex_count();
        Module::with_dims_zero_action(algebra, vec![0; n])
    }

    fn with_dims_zero_action(algebra: Arc<Algebra>, dims: Vec<usize>) -> Module {
        let action = (0..algebra.dim())
            .map(|b| {
                let (v, w) = algebra.peirce(b);
                if algebra.idempotents().contains(&b) {
                    Mat::identity(dims[v])
                } else {
                    Mat::zeros(dims[v], dims[w])
                }
            })
            .collect();
        Module {
            algebra,
            dims,
            action: Arc::new(action),
        }
    }

    /// A representation of the quiver: one `dims[src] x dims[tgt]` matrix per arrow.
    pub fn from_representation(
        algebra: Arc<Algebra>,
        dims: Vec<usize>,
        arrows: Vec<Mat>,
    ) -> Result<Module> {
        let pd = algebra
            .path_data()
            .ok_or_else(|| Error::PreconditionFail("algebra has no quiver presentation".into()))?;
        let q = &pd.quiver;
        if dims.len() != q.vertex_count || arrows.len() != q.arrows.len() {
            return Err(Error::ShapeMismatch(
                "representation does not match the quiver".into(),
            ));
        }
        for (a, m) in q.arrows.iter().zip(&arrows) {
            if m.rows() != dims[a.src] || m.cols() != dims[a.tgt] {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} has a {}x{} matrix, expected {}x{}",
                    a.label,
                    m.rows(),
                    m.cols(),
                    dims[a.src],
                    dims[a.tgt]
                )));
            }
        }
        let word_matrix = |src: usize, word: &[usize]| -> Mat {
            word.iter()
                .fold(Mat::identity(dims[src]), |acc, &i| acc.mul(&arrows[i]))
        };
        for (ri, r) in pd.relations.iter().enumerate() {
            let mut total: Option<Mat> = None;
            for (c, labels) in &r.terms {
                let word: Vec<usize> = labels
                    .iter()
                    .map(|l| q.arrow_index(l).expect("validated relation"))
                    .collect();
                let m = word_matrix(q.arrows[word[0]].src, &word).scale(c);
                total = Some(match total {
                    None => m,
                    Some(t) => t.add(&m),
                });
            }
            if total.is_some_and(|t| !t.is_zero()) {
                return Err(Error::RelationViolated(ri));
            }
        }
        let action = pd
            .words
            .iter()
            .map(|p| word_matrix(p.src, &p.arrows))
            .collect();
        Module::from_blocks_unchecked(algebra, dims, action)
    }

    /// Arrow matrices of a module over an algebra with a quiver presentation.
    pub fn arrow_matrices(&self) -> Option<Vec<Mat>> {
        let pd = self.algebra.path_data()?;
        Some(
            pd.arrow_basis
                .iter()
                .map(|&b| self.action[b].clone())
                .collect(),
        )
    }

    /// Normalises a module given by full action matrices in an arbitrary basis.
    pub fn from_full_action(algebra: Arc<Algebra>, mats: Vec<Mat>) -> Result<Module> {
        if mats.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(
                "one action matrix per basis element required".into(),
            ));
        }
        let n = mats.first().map_or(0, Mat::rows);
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::ShapeMismatch(
                "action matrices must be square of equal size".into(),
            ));
        }
        let mut dims = Vec::new();
        let mut rows = Vec::new();
        for &e in algebra.idempotents() {
            let img = crate::linalg::row_space(&mats[e]);
            dims.push(img.rows());
            rows.extend(img.row_vecs());
        }
        let p = Mat::from_rows(n, rows);
        if p.rows() != n {
            return Err(Error::ShapeMismatch(
                "idempotents do not decompose the module".into(),
            ));
        }
        let pinv = p.inverse().ok_or_else(|| {
            Error::ShapeMismatch("idempotents do not decompose the module".into())
        })?;
        let offsets = offsets(&dims);
        let action = (0..algebra.dim())
            .map(|b| {
                let (v, w) = algebra.peirce(b);
                p.mul(&mats[b])
                    .mul(&pinv)
                    .block(offsets[v], offsets[w], dims[v], dims[w])
            })
            .collect();
        Module::from_blocks(algebra, dims, action)
    }

    /// `e_v A`.
    pub fn projective(algebra: &Arc<Algebra>, v: usize) -> Module {
        let basis = algebra.left_block(v);
        let n = algebra.vertex_count();
        let dims: Vec<usize> = (0..n)
            .map(|w| basis.iter().filter(|&&b| algebra.peirce(b).1 == w).count())
            .collect();
        let by_vertex: Vec<Vec<usize>> = (0..n)
            .map(|w| {
                basis
                    .iter()
                    .copied()
                    .filter(|&b| algebra.peirce(b).1 == w)
                    .collect()
            })
            .collect();
        let action = (0..algebra.dim())
            .map(|b| {
                let (x, y) = algebra.peirce(b);
                let mut m = Mat::zeros(dims[x], dims[y]);
                for (r, &p) in by_vertex[x].iter().enumerate() {
                    for (k, c) in algebra.basis_product(p, b) {
                        let col = by_vertex[y]
                            .iter()
                            .position(|q| q == k)
                            .expect("product stays in e_v A e_y");
                        m[(r, col)] = c.clone();
                    }
                }
                m
            })
            .collect();
        Module {
            algebra: algebra.clone(),
            dims,
            action: Arc::new(action),
        }
    }

    /// `D(A e_v)`, the injective envelope of the simple at `v`.
    pub fn injective(algebra: &Arc<Algebra>, v: usize) -> Module {
        let op = algebra.opposite_arc();
        Module::projective(&op, v).dual_over(algebra.clone())
    }

    pub fn simple(algebra: &Arc<Algebra>, v: usize) -> Module {
        let mut dims = vec![0; algebra.vertex_count()];
        dims[v] = 1;
        Module::with_dims_zero_action(algebra.clone(), dims)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        same_algebra(&self.algebra, &other.algebra)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn offsets(&self) -> Vec<usize> {
        offsets(&self.dims)
    }

    pub fn block(&self, b: usize) -> &Mat {
        &self.action[b]
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.action
    }

    /// Action of basis element `b` as a full `dim x dim` matrix.
    pub fn full_action(&self, b: usize) -> Mat {
        let (v, w) = self.algebra.peirce(b);
        let off = self.offsets();
        let mut m = Mat::zeros(self.dim(), self.dim());
        m.set_block(off[v], off[w], &self.action[b]);
        m
    }

    /// Action of an algebra element as a full matrix.
    pub fn element_action(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.dim(), self.dim());
        for (b, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(&self.full_action(b), c);
            }
        }
        m
    }

    pub fn direct_sum(parts: &[Module]) -> Result<Module> {
        let first = parts
            .first()
            .ok_or_else(|| Error::PreconditionFail("empty direct sum".into()))?;
        if parts.iter().any(|p| !p.same_algebra(first)) {
            return Err(Error::AlgebraMismatch);
        }
        let a = first.algebra.clone();
        let n = a.vertex_count();
        let dims = (0..n)
            .map(|v| parts.iter().map(|p| p.dims[v]).sum())
            .collect();
        let action = (0..a.dim())
            .map(|b| Mat::block_diag(&parts.iter().map(|p| &p.action[b]).collect::<Vec<_>>()))
            .collect();
        Ok(Module {
            algebra: a,
            dims,
            action: Arc::new(action),
        })
    }

    pub fn power(&self, k: usize) -> Module {
        if k == 0 {
            return Module::zero(self.algebra.clone());
        }
        Module::direct_sum(&vec![self.clone(); k]).expect("same algebra")
    }

    /// The dual `D M`, a right module over the opposite algebra.
    pub fn dual(&self) -> Module {
        self.dual_over(self.algebra.opposite_arc())
    }

    /// The dual as a module over `target`, which must be the opposite of this module's algebra.
    pub fn dual_over(&self, target: Arc<Algebra>) -> Module {
        let action = self.action.iter().map(Mat::transpose).collect();
        Module {
            algebra: target,
            dims: self.dims.clone(),
            action: Arc::new(action),
        }
    }

    /// Per-vertex subspaces spanning `M J`, where `J` is generated by the generators of the algebra.
    pub fn radical_subspaces(&self) -> Vec<Subspace> {
        let a = &self.algebra;
        let n = a.vertex_count();
        let mut spans: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
        for &g in a.generators() {
            let (_, w) = a.peirce(g);
            spans[w].extend(self.action[g].row_vecs());
        }
        (0..n)
            .map(|w| Subspace::span(self.dims[w], &spans[w]))
            .collect()
    }

    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_subspaces()
            .iter()
            .zip(&self.dims)
            .map(|(s, d)| d - s.dim())
            .collect()
    }

    /// The submodule generated by per-vertex vectors, with its inclusion.
    pub fn submodule(&self, generators: &[Vec<Vec<Scalar>>]) -> (Module, Morphism) {
        let a = &self.algebra;
        let n = a.vertex_count();
        let mut spans: Vec<Subspace> = (0..n)
            .map(|v| Subspace::span(self.dims[v], &generators[v]))
            .collect();
        loop {
            let mut grown = false;
            for &g in a.generators() {
                let (v, w) = a.peirce(g);
                let images: Vec<Vec<Scalar>> = spans[v]
                    .basis()
                    .row_vecs()
                    .iter()
                    .map(|r| self.action[g].left_apply(r))
                    .collect();
                let mut new = spans[w].basis().row_vecs();
                let before = spans[w].dim();
                new.extend(images);
                spans[w] = Subspace::span(self.dims[w], &new);
                grown |= spans[w].dim() > before;
            }
            if !grown {
                break;
            }
        }
        self.sub_from_spaces(&spans)
    }

    /// The submodule with the given per-vertex subspaces, which must be closed under the action.
    pub fn sub_from_spaces(&self, spaces: &[Subspace]) -> (Module, Morphism) {
        let a = &self.algebra;
        let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
        let action = (0..a.dim())
            .map(|b| {
                let (v, w) = a.peirce(b);
                let rows = spaces[v]
                    .basis()
                    .row_vecs()
                    .iter()
                    .map(|r| spaces[w].coords(&self.action[b].left_apply(r)))
                    .collect();
                Mat::from_rows(dims[w], rows)
            })
            .collect();
        let sub = Module {
            algebra: a.clone(),
            dims,
            action: Arc::new(action),
        };
        let blocks = spaces.iter().map(|s| s.basis().clone()).collect();
        let inc = Morphism::new_unchecked(sub.clone(), self.clone(), blocks);
        (sub, inc)
    }

    /// The quotient by per-vertex subspaces closed under the action, with its projection.
    pub fn quotient(&self, spaces: &[Subspace]) -> (Module, Morphism) {
        let a = &self.algebra;
        let comps: Vec<Vec<usize>> = spaces.iter().map(Subspace::complement_units).collect();
        let dims: Vec<usize> = comps.iter().map(Vec::len).collect();
        let action = (0..a.dim())
            .map(|b| {
                let (v, w) = a.peirce(b);
                let rows = comps[v]
                    .iter()
                    .map(|&c| spaces[w].quotient_coords(self.action[b].row(c)))
                    .collect();
                Mat::from_rows(dims[w], rows)
            })
            .collect();
        let q = Module {
            algebra: a.clone(),
            dims: dims.clone(),
            action: Arc::new(action),
        };
        let blocks = (0..self.dims.len())
            .map(|v| {
                let rows = (0..self.dims[v])
                    .map(|i| spaces[v].quotient_coords(&unit_row(self.dims[v], i)))
                    .collect();
                Mat::from_rows(dims[v], rows)
            })
            .collect();
        let proj = Morphism::new_unchecked(self.clone(), q.clone(), blocks);
        (q, proj)
    }

    /// Replaces the algebra handle by an equal algebra.
    pub fn rebind(&self, algebra: Arc<Algebra>) -> Result<Module> {
        if !same_algebra(&self.algebra, &algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Module {
            algebra,
            dims: self.dims.clone(),
            action: self.action.clone(),
        })
    }
}

pub(crate) fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &d in dims {
        out.push(acc);
        acc += d;
    }
    out
}
