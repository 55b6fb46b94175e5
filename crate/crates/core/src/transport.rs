//! The endomorphism algebra `B = End_A(T)` and the functors `Hom_A(T, -)` and
//! `- (x)_B T` between `mod-A` and `mod-B`.
//!
//! A basis element of `B` in the Peirce block `(i, j)` is a map `T_j -> T_i`,
//! and the product `f g` is "apply `g`, then `f`". With this convention
//! `Hom_A(T, M)` is a right `B`-module by precomposition.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Origin};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Scalar, Subspace};
use crate::module::ar::end_radical;
use crate::module::decompose::{decompose, has_split_local_end, multiplicity};
use crate::module::hom::{hom_basis, hom_dim};
use crate::module::resolution::{ext_all_vanish, ext_dim, pd};
use crate::module::{Module, Morphism};
use crate::tilting::{res_dim, AddClass};

/// Coordinates of a morphism in a basis of its Hom space.
fn coords_in(basis: &[Morphism], f: &Morphism) -> Vec<Scalar> {
    if basis.is_empty() {
        return vec![];
    }
    let cols: Vec<Vec<Scalar>> = basis.iter().map(Morphism::flatten).collect();
    let m = Mat::from_rows(cols[0].len(), cols).transpose();
    linalg::solve(&m, &f.flatten())
        .ok()
        .flatten()
        .expect("morphism lies in the Hom space")
}

#[derive(Clone, Debug)]
pub struct EndAlgebraBundle {
    pub b: Arc<Algebra>,
    pub basis_morphisms: Vec<Morphism>,
    pub summands: Vec<Module>,
    pub t: Module,
    /// `T` as a right module over `B^op`; vertex `i` carries `T_i`.
    pub t_left: Module,
}

/// `B = End(T)` for a basic `T`, decomposed first.
pub fn endomorphism_algebra(t: &Module) -> Result<EndAlgebraBundle> {
    let summands = decompose(t, 0)?.summands;
    for i in 0..summands.len() {
        for j in 0..i {
            if summands[i].dims() == summands[j].dims()
                && multiplicity(&summands[j], &summands[i])? > 0
            {
                return Err(Error::NonBasic);
            }
        }
    }
    endomorphism_algebra_of(summands)
}

/// `B = End(T_0 + ... + T_{n-1})` for pairwise non-isomorphic indecomposables with split
/// local endomorphism rings, keeping the given order of summands.
pub fn endomorphism_algebra_of(summands: Vec<Module>) -> Result<EndAlgebraBundle> {
    let n = summands.len();
    if n == 0 {
        return Err(Error::PreconditionFail("empty module".into()));
    }
    for s in &summands {
        if !has_split_local_end(s) {
            return Err(Error::NonSplitEndRing);
        }
    }
    // block_basis[i][j]: basis of Hom(T_j, T_i); the identity comes first on the diagonal.
    let mut block_basis: Vec<Vec<Vec<Morphism>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            block_basis[i][j] = if i == j {
                let mut v = vec![Morphism::identity(&summands[i])];
                v.extend(end_radical(&summands[i]));
                v
            } else {
                hom_basis(&summands[j], &summands[i])?
            };
        }
    }
    let mut basis = Vec::new();
    let mut peirce = Vec::new();
    let mut labels = Vec::new();
    let mut index = vec![vec![Vec::new(); n]; n];
    // Idempotents first, then the remaining elements block by block.
    for i in 0..n {
        index[i][i].push(basis.len());
        basis.push(block_basis[i][i][0].clone());
        peirce.push((i, i));
        labels.push(format!("e{i}"));
    }
    for i in 0..n {
        for j in 0..n {
            let start = usize::from(i == j);
            for (k, f) in block_basis[i][j].iter().enumerate().skip(start) {
                index[i][j].push(basis.len());
                basis.push(f.clone());
                peirce.push((i, j));
                labels.push(format!("f{i}{j}_{k}"));
            }
        }
    }
    let d = basis.len();
    let mut table = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            let (i, j) = peirce[p];
            let (j2, k) = peirce[q];
            if j != j2 {
                table.push(vec![]);
                continue;
            }
            let prod = basis[q].then(&basis[p]).expect("composable");
            let c = coords_in(&block_basis[i][k], &prod);
            let entry = c
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(r, x)| (index[i][k][r], x))
                .collect();
            table.push(entry);
        }
    }
    let idempotents = (0..n).collect();
    let b = Arc::new(Algebra::from_structure(
        labels,
        table,
        idempotents,
        Origin::Endomorphism,
    )?);
    let t = Module::direct_sum(&summands)?;
    let op = b.opposite_arc();
    let action = basis.iter().map(Morphism::matrix).collect();
    let dims = summands.iter().map(Module::dim).collect();
    let t_left = Module::from_blocks_unchecked(op, dims, action)?;
    Ok(EndAlgebraBundle {
        b,
        basis_morphisms: basis,
        summands,
        t,
        t_left,
    })
}

/// `Hom_A(T, M)` as a right `B`-module, with the chosen basis of each `Hom(T_i, M)`.
#[derive(Clone, Debug)]
pub struct HomImage {
    pub module: Module,
    pub bases: Vec<Vec<Morphism>>,
}

impl EndAlgebraBundle {
    pub fn vertex_count(&self) -> usize {
        self.summands.len()
    }

    pub fn hom_functor(&self, m: &Module) -> Result<HomImage> {
        let bases: Vec<Vec<Morphism>> = self
            .summands
            .iter()
            .map(|s| hom_basis(s, m))
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let action = self
            .basis_morphisms
            .iter()
            .enumerate()
            .map(|(p, f)| {
                let (i, j) = self.b.peirce(p);
                let rows = bases[i]
                    .iter()
                    .map(|phi| coords_in(&bases[j], &f.then(phi).expect("composable")))
                    .collect();
                Mat::from_rows(dims[j], rows)
            })
            .collect();
        let module = Module::from_blocks_unchecked(self.b.clone(), dims, action)?;
        Ok(HomImage { module, bases })
    }

    pub fn hom_functor_module(&self, m: &Module) -> Result<Module> {
        Ok(self.hom_functor(m)?.module)
    }

    /// `Hom(T, f)` between the given images.
    pub fn hom_functor_map(&self, f: &Morphism, src: &HomImage, tgt: &HomImage) -> Morphism {
        let blocks = (0..self.vertex_count())
            .map(|i| {
                let rows = src.bases[i]
                    .iter()
                    .map(|phi| coords_in(&tgt.bases[i], &phi.then(f).expect("composable")))
                    .collect();
                Mat::from_rows(tgt.bases[i].len(), rows)
            })
            .collect();
        Morphism::new_unchecked(src.module.clone(), tgt.module.clone(), blocks)
    }

    pub fn tensor_functor(&self, n: &Module) -> Result<TensorImage> {
        if !crate::module::same_algebra(n.algebra_arc(), &self.b) {
            return Err(Error::AlgebraMismatch);
        }
        let a = self.t.algebra_arc().clone();
        let nv = a.vertex_count();
        let k = self.vertex_count();
        let nd = n.dims();
        // Layout of V_u = sum_i N_i (x) (T_i)_u.
        let mut offsets = vec![vec![0usize; k]; nv];
        let mut total = vec![0usize; nv];
        for u in 0..nv {
            for i in 0..k {
                offsets[u][i] = total[u];
                total[u] += nd[i] * self.summands[i].dims()[u];
            }
        }
        let mut rels: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); nv];
        for &g in self.b.generators() {
            let (i, j) = self.b.peirce(g);
            let f = &self.basis_morphisms[g];
            let nb = n.block(g);
            for u in 0..nv {
                let (ti, tj) = (self.summands[i].dims()[u], self.summands[j].dims()[u]);
                for x in 0..nd[i] {
                    for y in 0..tj {
                        let mut row = vec![Scalar::zero(); total[u]];
                        // (n b) (x) t
                        for z in 0..nd[j] {
                            if !nb[(x, z)].is_zero() {
                                row[offsets[u][j] + z * tj + y] += &nb[(x, z)];
                            }
                        }
                        // n (x) b(t)
                        let fu = f.block(u);
                        for w in 0..ti {
                            if !fu[(y, w)].is_zero() {
                                row[offsets[u][i] + x * ti + w] -= &fu[(y, w)];
                            }
                        }
                        if row.iter().any(|c| !c.is_zero()) {
                            rels[u].push(row);
                        }
                    }
                }
            }
        }
        let spaces: Vec<Subspace> = (0..nv)
            .map(|u| Subspace::span(total[u], &rels[u]))
            .collect();
        let comps: Vec<Vec<usize>> = spaces.iter().map(Subspace::complement_units).collect();
        let dims: Vec<usize> = comps.iter().map(Vec::len).collect();
        let action = (0..a.dim())
            .map(|b| {
                let (u, x) = a.peirce(b);
                let rows = comps[u]
                    .iter()
                    .map(|&c| {
                        // Locate the pure tensor n_p (x) t_q behind unit vector c.
                        let i = (0..k)
                            .rev()
                            .find(|&i| {
                                offsets[u][i] <= c
                                    && nd[i] * self.summands[i].dims()[u] > 0
                                    && c < offsets[u][i] + nd[i] * self.summands[i].dims()[u]
                            })
                            .expect("index in range");
                        let ti = self.summands[i].dims()[u];
                        let (p, q) = ((c - offsets[u][i]) / ti, (c - offsets[u][i]) % ti);
                        let img = self.summands[i].block(b).row(q).to_vec();
                        let tx = self.summands[i].dims()[x];
                        let mut v = vec![Scalar::zero(); total[x]];
                        for (w, val) in img.iter().enumerate() {
                            if !val.is_zero() {
                                v[offsets[x][i] + p * tx + w] = val.clone();
                            }
                        }
                        spaces[x].quotient_coords(&v)
                    })
                    .collect();
                Mat::from_rows(dims[x], rows)
            })
            .collect();
        let module = Module::from_blocks_unchecked(a, dims, action)?;
        Ok(TensorImage {
            module,
            offsets,
            spaces,
        })
    }

    pub fn tensor_functor_module(&self, n: &Module) -> Result<Module> {
        Ok(self.tensor_functor(n)?.module)
    }

    /// Evaluation `Hom(T, M) (x)_B T -> M`, an isomorphism for `M` in `T^perp`
    /// generated by `T`.
    pub fn counit(&self, m: &Module, h: &HomImage, tens: &TensorImage) -> Morphism {
        let nv = m.dims().len();
        let k = self.vertex_count();
        let blocks = (0..nv)
            .map(|u| {
                let total = tens.spaces[u].ambient();
                let mut pure = Mat::zeros(total, m.dims()[u]);
                for i in 0..k {
                    let ti = self.summands[i].dims()[u];
                    for (p, phi) in h.bases[i].iter().enumerate() {
                        for q in 0..ti {
                            let r = tens.offsets[u][i] + p * ti + q;
                            for (w, val) in phi.block(u).row(q).iter().enumerate() {
                                pure[(r, w)] = val.clone();
                            }
                        }
                    }
                }
                pure.select_rows(&tens.spaces[u].complement_units())
            })
            .collect();
        Morphism::new_unchecked(tens.module.clone(), m.clone(), blocks)
    }

    /// The unit `N -> Hom(T, N (x)_B T)`, sending `n` in `N e_i` to `t -> n (x) t`.
    pub fn unit(&self, n: &Module, tens: &TensorImage, h: &HomImage) -> Morphism {
        let nv = tens.module.dims().len();
        let k = self.vertex_count();
        let blocks = (0..k)
            .map(|i| {
                let rows = (0..n.dims()[i])
                    .map(|p| {
                        let phi_blocks: Vec<Mat> = (0..nv)
                            .map(|u| {
                                let ti = self.summands[i].dims()[u];
                                let total = tens.spaces[u].ambient();
                                let rows = (0..ti)
                                    .map(|q| {
                                        let mut v = vec![Scalar::zero(); total];
                                        v[tens.offsets[u][i] + p * ti + q] = Scalar::one();
                                        tens.spaces[u].quotient_coords(&v)
                                    })
                                    .collect();
                                Mat::from_rows(tens.module.dims()[u], rows)
                            })
                            .collect();
                        let phi = Morphism::new_unchecked(
                            self.summands[i].clone(),
                            tens.module.clone(),
                            phi_blocks,
                        );
                        coords_in(&h.bases[i], &phi)
                    })
                    .collect();
                Mat::from_rows(h.bases[i].len(), rows)
            })
            .collect();
        Morphism::new_unchecked(n.clone(), h.module.clone(), blocks)
    }

    pub fn dual_dt(&self, bound: usize) -> Result<DtBundle> {
        let dt = self.t_left.dual_over(self.b.clone());
        let id_bound = pd(&self.t_left, bound)?;
        Ok(DtBundle { dt, id_bound })
    }

    /// Dimension equalities between `(M, N)` in `T^perp` and their images over `B`.
    pub fn miyashita_check(&self, m: &Module, n: &Module, jmax: usize) -> Result<MiyashitaReport> {
        let hm = self.hom_functor_module(m)?;
        let hn = self.hom_functor_module(n)?;
        let mut mismatches = Vec::new();
        let (a_hom, b_hom) = (hom_dim(m, n)?, hom_dim(&hm, &hn)?);
        if a_hom != b_hom {
            mismatches.push((0, a_hom, b_hom));
        }
        for j in 1..=jmax {
            let (ea, eb) = (ext_dim(j, m, n)?, ext_dim(j, &hm, &hn)?);
            if ea != eb {
                mismatches.push((j, ea, eb));
            }
        }
        Ok(MiyashitaReport { mismatches })
    }

    /// `T-pd M` against `pd_B Hom(T, M)`, both cut off at `bound`.
    pub fn tpd_transport_check(
        &self,
        m: &Module,
        bound: usize,
    ) -> Result<(Option<usize>, Option<usize>)> {
        let add_t = AddClass::from_indecomposables(self.summands.clone());
        let lhs = res_dim(&add_t, m, bound)?;
        let rhs = match pd(&self.hom_functor_module(m)?, bound) {
            Ok(p) => Some(p),
            Err(Error::PdBoundTooSmall(_)) => None,
            Err(e) => return Err(e),
        };
        Ok((lhs, rhs))
    }
}

#[derive(Clone, Debug)]
pub struct TensorImage {
    pub module: Module,
    offsets: Vec<Vec<usize>>,
    spaces: Vec<Subspace>,
}

#[derive(Clone, Debug)]
pub struct DtBundle {
    pub dt: Module,
    pub id_bound: usize,
}

impl DtBundle {
    pub fn in_left_perp(&self, n: &Module) -> Result<bool> {
        ext_all_vanish(n, &self.dt, self.id_bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiyashitaReport {
    /// `(degree, dim over A, dim over B)`; degree 0 stands for Hom.
    pub mismatches: Vec<(usize, usize, usize)>,
}

impl MiyashitaReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}
