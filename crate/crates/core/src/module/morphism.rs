use std::fmt;

use num_traits::Zero;

use super::Module;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Scalar, Subspace};

/// A module homomorphism `f: M -> N`, given by one block per vertex acting
/// on row vectors: `f(m) = m F_v` for `m` in `M e_v`.
#[derive(Clone)]
pub struct Morphism {
    source: Module,
    target: Module,
    blocks: Vec<Mat>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Morphism({:?} -> {:?}, rank {})",
            self.source,
            self.target,
            self.rank()
        )
    }
}

impl Morphism {
    pub fn new(source: Module, target: Module, blocks: Vec<Mat>) -> Result<Morphism> {
        if !source.same_algebra(&target) {
            return Err(Error::AlgebraMismatch);
        }
        if blocks.len() != source.dims().len()
            || blocks
                .iter()
                .enumerate()
                .any(|(v, b)| b.rows() != source.dims()[v] || b.cols() != target.dims()[v])
        {
            return Err(Error::ShapeMismatch(
                "morphism blocks do not match the vertex dimensions".into(),
            ));
        }
        let f = Morphism {
            source,
            target,
            blocks,
        };
        if !f.intertwines() {
            return Err(Error::ShapeMismatch(
                "matrix does not intertwine the actions".into(),
            ));
        }
        Ok(f)
    }

    /// Skips the intertwining check.
    pub fn new_unchecked(source: Module, target: Module, blocks: Vec<Mat>) -> Morphism {
        Morphism {
            source,
            target,
            blocks,
        }
    }

    /// Builds a morphism from a full `dim M x dim N` matrix.
    pub fn from_matrix(source: Module, target: Module, m: &Mat) -> Result<Morphism> {
        if m.rows() != source.dim() || m.cols() != target.dim() {
            return Err(Error::ShapeMismatch(
                "matrix size does not match the modules".into(),
            ));
        }
        let (so, to) = (source.offsets(), target.offsets());
        let full_ok = {
            let mut ok = true;
            for v in 0..so.len() {
                for w in 0..to.len() {
                    if v != w
                        && !m
                            .block(so[v], to[w], source.dims()[v], target.dims()[w])
                            .is_zero()
                    {
                        ok = false;
                    }
                }
            }
            ok
        };
        if !full_ok {
            return Err(Error::ShapeMismatch(
                "matrix does not respect the idempotents".into(),
            ));
        }
        let blocks = (0..so.len())
            .map(|v| m.block(so[v], to[v], source.dims()[v], target.dims()[v]))
            .collect();
        Morphism::new(source, target, blocks)
    }

    /// Block-diagonal `R_M(b) F = F R_N(b)` for every generator `b`.
    pub fn intertwines(&self) -> bool {
        let a = self.source.algebra();
        (0..a.dim()).all(|b| {
            let (v, w) = a.peirce(b);
            self.source.block(b).mul(&self.blocks[w]) == self.blocks[v].mul(self.target.block(b))
        })
    }

    pub fn identity(m: &Module) -> Morphism {
        let blocks = m.dims().iter().map(|&d| Mat::identity(d)).collect();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            blocks,
        }
    }

    pub fn zero(source: &Module, target: &Module) -> Morphism {
        let blocks = source
            .dims()
            .iter()
            .zip(target.dims())
            .map(|(&r, &c)| Mat::zeros(r, c))
            .collect();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn block(&self, v: usize) -> &Mat {
        &self.blocks[v]
    }

    pub fn matrix(&self) -> Mat {
        let (so, to) = (self.source.offsets(), self.target.offsets());
        let mut m = Mat::zeros(self.source.dim(), self.target.dim());
        for (v, b) in self.blocks.iter().enumerate() {
            m.set_block(so[v], to[v], b);
        }
        m
    }

    /// Flattened block entries; a coordinate vector in the space of block-diagonal matrices.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries().iter().cloned())
            .collect()
    }

    pub fn from_flat(source: &Module, target: &Module, v: &[Scalar]) -> Morphism {
        let mut blocks = Vec::new();
        let mut pos = 0;
        for (&r, &c) in source.dims().iter().zip(target.dims()) {
            blocks.push(Mat::from_vec(r, c, v[pos..pos + r * c].to_vec()));
            pos += r * c;
        }
        Morphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix().left_apply(x)
    }

    /// `g . self`: first `self`, then `g`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if self.target.dims() != g.source.dims() || !self.target.same_algebra(&g.source) {
            return Err(Error::ShapeMismatch("morphisms are not composable".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&g.blocks)
            .map(|(f, g)| f.mul(g))
            .collect();
        Ok(Morphism {
            source: self.source.clone(),
            target: g.target.clone(),
            blocks,
        })
    }

    pub fn add(&self, g: &Morphism) -> Morphism {
        let blocks = self
            .blocks
            .iter()
            .zip(&g.blocks)
            .map(|(f, g)| f.add(g))
            .collect();
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        let blocks = self.blocks.iter().map(|f| f.scale(c)).collect();
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(linalg::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_iso() {
            return None;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.inverse())
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks,
        })
    }

    pub fn kernel(&self) -> (Module, Morphism) {
        let spaces: Vec<Subspace> = self
            .blocks
            .iter()
            .zip(self.source.dims())
            .map(|(b, &d)| Subspace::span(d, &linalg::left_kernel_basis(b)))
            .collect();
        self.source.sub_from_spaces(&spaces)
    }

    pub fn image_spaces(&self) -> Vec<Subspace> {
        self.blocks
            .iter()
            .zip(self.target.dims())
            .map(|(b, &d)| Subspace::span(d, &b.row_vecs()))
            .collect()
    }

    pub fn image(&self) -> (Module, Morphism) {
        self.target.sub_from_spaces(&self.image_spaces())
    }

    pub fn cokernel(&self) -> (Module, Morphism) {
        self.target.quotient(&self.image_spaces())
    }

    /// The dual map `D N -> D M`.
    pub fn dual(&self) -> Morphism {
        let ds = self.target.dual();
        let dt = self.source.dual_over(ds.algebra_arc().clone());
        let blocks = self.blocks.iter().map(Mat::transpose).collect();
        Morphism {
            source: ds,
            target: dt,
            blocks,
        }
    }

    /// Factors `self: X -> M` through a monomorphism `mono: K -> M` whose image contains the image of `self`.
    pub fn factor_through_mono(&self, mono: &Morphism) -> Option<Morphism> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (g, i) in self.blocks.iter().zip(&mono.blocks) {
            let it = i.transpose();
            let mut rows = Vec::with_capacity(g.rows());
            for r in g.row_vecs() {
                rows.push(linalg::solve(&it, &r).ok()??);
            }
            blocks.push(Mat::from_rows(i.rows(), rows));
        }
        Some(Morphism {
            source: self.source.clone(),
            target: mono.source.clone(),
            blocks,
        })
    }

    /// Trace of an endomorphism.
    pub fn trace(&self) -> Scalar {
        self.blocks
            .iter()
            .fold(Scalar::zero(), |acc, b| acc + b.trace())
    }
}

/// Canonical inclusions and projections of a direct sum.
pub fn direct_sum_maps(parts: &[Module]) -> Result<(Module, Vec<Morphism>, Vec<Morphism>)> {
    let sum = Module::direct_sum(parts)?;
    let n = sum.dims().len();
    let mut incs = Vec::new();
    let mut projs = Vec::new();
    let mut starts = vec![0usize; n];
    for p in parts {
        let mut inc_blocks = Vec::new();
        let mut proj_blocks = Vec::new();
        for v in 0..n {
            let mut i = Mat::zeros(p.dims()[v], sum.dims()[v]);
            i.set_block(0, starts[v], &Mat::identity(p.dims()[v]));
            proj_blocks.push(i.transpose());
            inc_blocks.push(i);
            starts[v] += p.dims()[v];
        }
        incs.push(Morphism::new_unchecked(p.clone(), sum.clone(), inc_blocks));
        projs.push(Morphism::new_unchecked(sum.clone(), p.clone(), proj_blocks));
    }
    Ok((sum, incs, projs))
}

/// `sum_i incs_i . maps_i`: a map from a direct sum given by its components.
pub fn from_components_out(sum: &Module, target: &Module, maps: &[Morphism]) -> Morphism {
    let n = sum.dims().len();
    let blocks = (0..n)
        .map(|v| {
            let rows: Vec<Vec<Scalar>> = maps.iter().flat_map(|f| f.blocks[v].row_vecs()).collect();
            Mat::from_rows(target.dims()[v], rows)
        })
        .collect();
    Morphism::new_unchecked(sum.clone(), target.clone(), blocks)
}

/// A map into a direct sum given by its components.
pub fn from_components_in(source: &Module, sum: &Module, maps: &[Morphism]) -> Morphism {
    let n = sum.dims().len();
    let blocks = (0..n)
        .map(|v| {
            let parts: Vec<&Mat> = maps.iter().map(|f| &f.blocks[v]).collect();
            parts
                .iter()
                .fold(Mat::zeros(source.dims()[v], 0), |acc, b| acc.hstack(b))
        })
        .collect();
    Morphism::new_unchecked(source.clone(), sum.clone(), blocks)
}
