//! Auslander-Reiten translates, almost split sequences and the AR quiver of a
//! representation-finite algebra.

use std::collections::VecDeque;
use std::sync::Arc;

use super::decompose::{decompose, end_radical_dim, has_split_local_end, multiplicity};
use super::hom::{combine, end_basis, hom_basis};
use super::morphism::{from_components_in, from_components_out};
use super::resolution::{lift_along_epi, map_from_projective, projective_cover, projective_sum};
use super::{Module, Morphism};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Scalar, Subspace};

/// The transpose `Tr M`, a right module over the opposite algebra.
pub fn transpose(m: &Module) -> Module {
    let a = m.algebra_arc().clone();
    let op = a.opposite_arc();
    let pc0 = projective_cover(m);
    let (k, inc) = pc0.epi.kernel();
    let pc1 = projective_cover(&k);
    let f = pc1.epi.then(&inc).expect("composable");
    let gens1 = super::resolution::summand_generators(&a, &pc1.multiplicities);
    let verts0: Vec<usize> = expand(&pc0.multiplicities);
    let verts1: Vec<usize> = expand(&pc1.multiplicities);
    // Offsets of each summand of P0 within each vertex block.
    let p0_parts: Vec<Module> = verts0.iter().map(|&v| Module::projective(&a, v)).collect();
    let mut starts = vec![vec![0usize; a.vertex_count()]; p0_parts.len()];
    let mut acc = vec![0usize; a.vertex_count()];
    for (i, p) in p0_parts.iter().enumerate() {
        starts[i] = acc.clone();
        for (w, d) in p.dims().iter().enumerate() {
            acc[w] += d;
        }
    }
    let q0 = projective_sum(&op, &pc0.multiplicities);
    let q1 = projective_sum(&op, &pc1.multiplicities);
    let q1_parts: Vec<Module> = verts1.iter().map(|&w| Module::projective(&op, w)).collect();
    let mut rows_out = Vec::new();
    for (i, &vi) in verts0.iter().enumerate() {
        let comps: Vec<Morphism> = verts1
            .iter()
            .enumerate()
            .map(|(j, &wj)| {
                let (_, row) = gens1[j];
                let image = f.block(wj).row(row);
                let d = p0_parts[i].dims()[wj];
                let coeffs = image[starts[i][wj]..starts[i][wj] + d].to_vec();
                map_from_projective(&op, vi, &q1_parts[j], &coeffs)
            })
            .collect();
        let qi = Module::projective(&op, vi);
        rows_out.push(if comps.is_empty() {
            Morphism::zero(&qi, &q1)
        } else {
            from_components_in(&qi, &q1, &comps)
        });
    }
    if rows_out.is_empty() {
        return q1;
    }
    let g = from_components_out(&q0, &q1, &rows_out);
    g.cokernel().0
}

fn expand(mult: &[usize]) -> Vec<usize> {
    mult.iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k))
        .collect()
}

/// `tau M = D Tr M`.
pub fn tau(m: &Module) -> Module {
    transpose(m).dual_over(m.algebra_arc().clone())
}

/// `tau^{-1} M = Tr D M`.
pub fn tau_inverse(m: &Module) -> Module {
    let t = transpose(&m.dual());
    t.rebind(m.algebra_arc().clone())
        .expect("double opposite is the original algebra")
}

/// An almost split sequence `0 -> tau X -> E -> X -> 0`.
#[derive(Clone, Debug)]
pub struct AlmostSplit {
    pub left: Module,
    pub middle: Module,
    pub mono: Morphism,
    pub epi: Morphism,
}

/// Radical of `End(M)` as explicit morphisms.
pub fn end_radical(m: &Module) -> Vec<Morphism> {
    let basis = end_basis(m);
    let n = basis.len();
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = basis[i].then(&basis[j]).expect("endomorphisms").trace();
        }
    }
    linalg::left_kernel_basis(&g)
        .iter()
        .map(|c| combine(&basis, c, m, m))
        .collect()
}

/// The almost split sequence ending in a non-projective indecomposable `x`.
pub fn almost_split_sequence(x: &Module) -> Result<AlmostSplit> {
    let pc = projective_cover(x);
    if pc.cover.dim() == x.dim() {
        return Err(Error::IsProjective);
    }
    let tx = tau(x);
    let (omega, iota) = pc.epi.kernel();
    let h = hom_basis(&omega, &tx)?;
    let len: usize = omega.dims().iter().zip(tx.dims()).map(|(a, b)| a * b).sum();
    // Maps that extend to P0 give split extensions.
    let restr: Vec<Vec<Scalar>> = hom_basis(&pc.cover, &tx)?
        .iter()
        .map(|g| iota.then(g).expect("composable").flatten())
        .collect();
    let trivial = Subspace::span(len, &restr);
    let mut conditions: Vec<Vec<Scalar>> = Vec::new();
    for r in end_radical(x) {
        let lifted = lift_along_epi(
            &pc.multiplicities,
            &pc.epi.then(&r).expect("composable"),
            &pc.epi,
        )
        .ok_or_else(|| Error::PreconditionFail("lift through projective cover failed".into()))?;
        let omega_r = iota
            .then(&lifted)
            .expect("composable")
            .factor_through_mono(&iota)
            .ok_or_else(|| Error::PreconditionFail("restriction to syzygy failed".into()))?;
        let images: Vec<Vec<Scalar>> = h
            .iter()
            .map(|hk| trivial.reduce(&omega_r.then(hk).expect("composable").flatten()))
            .collect();
        // Each coordinate gives a linear condition on the coefficients of xi.
        for c in 0..len {
            conditions.push(images.iter().map(|v| v[c].clone()).collect());
        }
    }
    let socle: Vec<Vec<Scalar>> = if conditions.is_empty() {
        (0..h.len())
            .map(|i| {
                let mut e = vec![Scalar::from_integer(0.into()); h.len()];
                e[i] = Scalar::from_integer(1.into());
                e
            })
            .collect()
    } else {
        linalg::kernel_basis(&Mat::from_rows(h.len(), conditions))
    };
    let xi = socle
        .iter()
        .map(|c| combine(&h, c, &omega, &tx))
        .find(|xi| !trivial.contains(&xi.flatten()))
        .ok_or_else(|| Error::PreconditionFail("no nonsplit extension found".into()))?;
    // Pushout of the projective presentation along xi.
    let (sum, incs, _) = super::morphism::direct_sum_maps(&[pc.cover.clone(), tx.clone()])?;
    let minus_xi = xi.scale(&Scalar::from_integer((-1).into()));
    let g = from_components_in(&omega, &sum, &[iota.clone(), minus_xi]);
    let (e, proj) = g.cokernel();
    let mono = incs[1].then(&proj).expect("composable");
    // P0 -> X factors through E; its induced map E -> X is the epi of the sequence.
    let pcover_to_e = incs[0].then(&proj).expect("composable");
    let epi = factor_cokernel(&pc.cover, &pcover_to_e, &pc.epi, &e, x)?;
    Ok(AlmostSplit {
        left: tx,
        middle: e,
        mono,
        epi,
    })
}

/// Given `u: P -> E` and `p: P -> X` (with `tau X -> E` complementing),
/// solves for `E -> X` sending `u(y)` to `p(y)` and `tau X` to zero.
fn factor_cokernel(
    p: &Module,
    u: &Morphism,
    pm: &Morphism,
    e: &Module,
    x: &Module,
) -> Result<Morphism> {
    let _ = p;
    let basis = hom_basis(e, x)?;
    let target = pm.flatten();
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|f| u.then(f).expect("composable").flatten())
        .collect();
    if cols.is_empty() {
        return Err(Error::PreconditionFail(
            "no maps from the middle term".into(),
        ));
    }
    let m = Mat::from_rows(target.len(), cols).transpose();
    let c = linalg::solve(&m, &target)?
        .ok_or_else(|| Error::PreconditionFail("epi does not factor".into()))?;
    Ok(combine(&basis, &c, e, x))
}

/// The AR quiver: indecomposables up to isomorphism, translation and irreducible maps.
#[derive(Clone, Debug)]
pub struct ArQuiver {
    pub modules: Vec<Module>,
    pub projective: Vec<bool>,
    pub injective: Vec<bool>,
    pub tau: Vec<Option<usize>>,
    /// `(from, to, multiplicity)` for each pair joined by irreducible maps.
    pub arrows: Vec<(usize, usize, usize)>,
}

pub struct Knitter {
    algebra: Arc<Algebra>,
    modules: Vec<Module>,
    seed: u64,
    cap: usize,
}

impl Knitter {
    fn find(&self, x: &Module) -> Result<Option<usize>> {
        for (i, m) in self.modules.iter().enumerate() {
            if m.dims() == x.dims() && multiplicity(m, x)? == 1 {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn insert(&mut self, x: Module, queue: &mut VecDeque<usize>) -> Result<usize> {
        if let Some(i) = self.find(&x)? {
            return Ok(i);
        }
        if !has_split_local_end(&x) {
            return Err(Error::NonSplitEndRing);
        }
        if self.modules.len() >= self.cap {
            return Err(Error::CapExceeded(self.cap));
        }
        self.modules.push(x);
        queue.push_back(self.modules.len() - 1);
        Ok(self.modules.len() - 1)
    }

    fn summands(&mut self, m: &Module, queue: &mut VecDeque<usize>) -> Result<Vec<usize>> {
        let d = decompose(m, self.seed)?;
        d.summands
            .into_iter()
            .map(|s| self.insert(s, queue))
            .collect()
    }
}

/// Knits the AR quiver by closing the projectives and injectives under
/// translates, radicals of projectives, socle quotients of injectives and
/// middle terms of almost split sequences.
pub fn knit(a: &Arc<Algebra>, cap: usize, seed: u64) -> Result<ArQuiver> {
    let mut k = Knitter {
        algebra: a.clone(),
        modules: Vec::new(),
        seed,
        cap,
    };
    let mut queue = VecDeque::new();
    let n = a.vertex_count();
    for v in 0..n {
        k.insert(Module::projective(a, v), &mut queue)?;
    }
    for v in 0..n {
        k.insert(Module::injective(a, v), &mut queue)?;
    }
    let mut preds: Vec<Vec<usize>> = Vec::new();
    let mut taus: Vec<Option<usize>> = Vec::new();
    let mut proj: Vec<bool> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let x = k.modules[i].clone();
        let is_proj = projective_cover(&x).cover.dim() == x.dim();
        let pred = if is_proj {
            let (rad, _) = x.sub_from_spaces(&x.radical_subspaces());
            if rad.is_zero() {
                vec![]
            } else {
                k.summands(&rad, &mut queue)?
            }
        } else {
            let seq = almost_split_sequence(&x)?;
            let t = k.insert(seq.left.clone(), &mut queue)?;
            set(&mut taus, i, Some(t));
            k.summands(&seq.middle, &mut queue)?
        };
        set(&mut preds, i, pred);
        set(&mut proj, i, is_proj);
        let dual_a = k.algebra.opposite_arc();
        let is_inj = projective_cover(&x.dual_over(dual_a)).cover.dim() == x.dim();
        if is_inj {
            let soc_quot = socle_quotient(&x);
            if !soc_quot.is_zero() {
                k.summands(&soc_quot, &mut queue)?;
            }
        } else {
            k.insert(tau_inverse(&x), &mut queue)?;
        }
    }
    let count = k.modules.len();
    let injective = k
        .modules
        .iter()
        .map(|m| projective_cover(&m.dual()).cover.dim() == m.dim())
        .collect();
    let mut arrows = Vec::new();
    for (to, p) in preds.iter().enumerate() {
        let mut counts = std::collections::BTreeMap::new();
        for &from in p {
            *counts.entry(from).or_insert(0usize) += 1;
        }
        for (from, c) in counts {
            arrows.push((from, to, c));
        }
    }
    taus.resize(count, None);
    Ok(ArQuiver {
        modules: k.modules,
        projective: proj,
        injective,
        tau: taus,
        arrows,
    })
}

fn set<T: Clone + Default>(v: &mut Vec<T>, i: usize, x: T) {
    if v.len() <= i {
        v.resize(i + 1, T::default());
    }
    v[i] = x;
}

/// `I / soc I`, computed dually as the radical of the dual.
pub fn socle_quotient(x: &Module) -> Module {
    let d = x.dual();
    let (rad, _) = d.sub_from_spaces(&d.radical_subspaces());
    rad.dual_over(x.algebra_arc().clone())
}

impl ArQuiver {
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn index_of(&self, m: &Module) -> Result<Option<usize>> {
        for (i, x) in self.modules.iter().enumerate() {
            if x.dims() == m.dims() && multiplicity(x, m)? == 1 {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Multiplicities of each indecomposable of the quiver in `m`.
    pub fn decompose(&self, m: &Module) -> Result<Vec<usize>> {
        super::decompose::decompose_against(m, &self.modules)
    }

    pub fn predecessors(&self, i: usize) -> Vec<(usize, usize)> {
        self.arrows
            .iter()
            .filter(|a| a.1 == i)
            .map(|a| (a.0, a.2))
            .collect()
    }

    pub fn successors(&self, i: usize) -> Vec<(usize, usize)> {
        self.arrows
            .iter()
            .filter(|a| a.0 == i)
            .map(|a| (a.1, a.2))
            .collect()
    }

    /// Checks every mesh: the arrows into `X` match the arrows out of `tau X`
    /// and dimension vectors are additive.
    pub fn meshes_hold(&self) -> bool {
        (0..self.len()).all(|i| match self.tau[i] {
            None => self.projective[i],
            Some(t) => {
                let mut into = self.predecessors(i);
                let mut out = self.successors(t);
                into.sort();
                out.sort();
                let mid: Vec<usize> = (0..self.modules[i].dims().len())
                    .map(|v| {
                        into.iter()
                            .map(|&(j, c)| c * self.modules[j].dims()[v])
                            .sum()
                    })
                    .collect();
                let ends: Vec<usize> = self.modules[i]
                    .dims()
                    .iter()
                    .zip(self.modules[t].dims())
                    .map(|(a, b)| a + b)
                    .collect();
                into == out && mid == ends
            }
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph ar {\n");
        for (i, m) in self.modules.iter().enumerate() {
            let shape = match (self.projective[i], self.injective[i]) {
                (true, true) => "doubleoctagon",
                (true, false) => "box",
                (false, true) => "diamond",
                _ => "ellipse",
            };
            s.push_str(&format!(
                "  m{i} [label=\"{:?}\", shape={shape}];\n",
                m.dims()
            ));
        }
        for &(a, b, c) in &self.arrows {
            for _ in 0..c {
                s.push_str(&format!("  m{a} -> m{b};\n"));
            }
        }
        for (i, t) in self.tau.iter().enumerate() {
            if let Some(t) = t {
                s.push_str(&format!(
                    "  m{i} -> m{t} [style=dashed, constraint=false];\n"
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Radical dimension of `End(M)`; zero exactly for semisimple endomorphism rings.
pub fn end_radical_dimension(m: &Module) -> usize {
    end_radical_dim(&end_basis(m))
}
