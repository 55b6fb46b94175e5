//! Projective covers, syzygies and the homological dimensions and Ext/Tor
//! dimensions derived from them.

use std::sync::Arc;

use num_traits::Zero;

use super::hom::hom_dim;
use super::morphism::from_components_out;
use super::{Module, Morphism};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar};

/// A projective cover `P -> M` with `P = sum_v P_v^{mult[v]}`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub cover: Module,
    pub epi: Morphism,
    pub multiplicities: Vec<usize>,
}

/// `sum_v P_v^{mult[v]}`, ordered by vertex.
pub fn projective_sum(a: &Arc<Algebra>, mult: &[usize]) -> Module {
    let parts: Vec<Module> = mult
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_with(move || Module::projective(a, v)).take(k))
        .collect();
    if parts.is_empty() {
        Module::zero(a.clone())
    } else {
        Module::direct_sum(&parts).expect("same algebra")
    }
}

/// The map `P_v -> M` sending `e_v` to `x` in `M e_v`.
pub fn map_from_projective(a: &Arc<Algebra>, v: usize, m: &Module, x: &[Scalar]) -> Morphism {
    let p = Module::projective(a, v);
    let basis = a.left_block(v);
    let blocks = (0..a.vertex_count())
        .map(|y| {
            let rows: Vec<Vec<Scalar>> = basis
                .iter()
                .filter(|&&b| a.peirce(b).1 == y)
                .map(|&b| m.block(b).left_apply(x))
                .collect();
            Mat::from_rows(m.dims()[y], rows)
        })
        .collect();
    Morphism::new_unchecked(p, m.clone(), blocks)
}

/// Vertex and row (within that vertex block) of the generator of each indecomposable
/// summand of [`projective_sum`].
pub fn summand_generators(a: &Algebra, mult: &[usize]) -> Vec<(usize, usize)> {
    let n = a.vertex_count();
    let mut used = vec![0usize; n];
    let mut out = Vec::new();
    for (v, &k) in mult.iter().enumerate() {
        let block: Vec<usize> = a
            .left_block(v)
            .into_iter()
            .filter(|&b| a.peirce(b).1 == v)
            .collect();
        let pos = block
            .iter()
            .position(|&b| b == a.idempotents()[v])
            .expect("idempotent lies in its own block");
        for _ in 0..k {
            out.push((v, used[v] + pos));
            for (w, u) in used.iter_mut().enumerate() {
                *u += a
                    .left_block(v)
                    .iter()
                    .filter(|&&b| a.peirce(b).1 == w)
                    .count();
            }
        }
    }
    out
}

/// Lifts `g: P -> N` along an epimorphism `epi: M -> N`, where `P = projective_sum(mult)`.
pub fn lift_along_epi(mult: &[usize], g: &Morphism, epi: &Morphism) -> Option<Morphism> {
    let p = g.source();
    let m = epi.source();
    let a = m.algebra_arc().clone();
    let mut maps = Vec::new();
    for (v, row) in summand_generators(&a, mult) {
        let t = g.block(v).row(row).to_vec();
        let y = crate::linalg::solve(&epi.block(v).transpose(), &t).ok()??;
        maps.push(map_from_projective(&a, v, m, &y));
    }
    Some(if maps.is_empty() {
        Morphism::zero(p, m)
    } else {
        from_components_out(p, m, &maps)
    })
}

pub fn projective_cover(m: &Module) -> ProjectiveCover {
    let a = m.algebra_arc().clone();
    let rad = m.radical_subspaces();
    let mut maps = Vec::new();
    let mut mult = vec![0; a.vertex_count()];
    for (v, s) in rad.iter().enumerate() {
        for c in s.complement_units() {
            let mut x = vec![Scalar::zero(); m.dims()[v]];
            x[c] = num_traits::One::one();
            maps.push(map_from_projective(&a, v, m, &x));
            mult[v] += 1;
        }
    }
    let cover = projective_sum(&a, &mult);
    let epi = if maps.is_empty() {
        Morphism::zero(&cover, m)
    } else {
        from_components_out(&cover, m, &maps)
    };
    ProjectiveCover {
        cover,
        epi,
        multiplicities: mult,
    }
}

pub fn syzygy(m: &Module) -> Module {
    projective_cover(m).epi.kernel().0
}

pub fn is_projective(m: &Module) -> bool {
    projective_cover(m).cover.dim() == m.dim()
}

/// Projective dimension, searching at most `bound` syzygies.
pub fn pd(m: &Module, bound: usize) -> Result<usize> {
    let mut cur = m.clone();
    for k in 0..=bound {
        let pc = projective_cover(&cur);
        if pc.cover.dim() == cur.dim() {
            return Ok(k);
        }
        cur = pc.epi.kernel().0;
    }
    Err(Error::PdBoundTooSmall(bound))
}

/// Injective dimension, as the projective dimension of the dual.
pub fn id(m: &Module, bound: usize) -> Result<usize> {
    pd(&m.dual(), bound)
}

/// The minimal projective resolution as the list of covering multiplicities
/// and syzygies `[M, Omega M, Omega^2 M, ...]` up to the first projective.
pub fn syzygies(m: &Module, bound: usize) -> Result<(Vec<Module>, Vec<Vec<usize>>)> {
    let mut mods = vec![m.clone()];
    let mut mults = Vec::new();
    for _ in 0..=bound {
        let cur = mods.last().expect("nonempty");
        let pc = projective_cover(cur);
        mults.push(pc.multiplicities.clone());
        if pc.cover.dim() == cur.dim() {
            return Ok((mods, mults));
        }
        let k = pc.epi.kernel().0;
        mods.push(k);
    }
    Err(Error::PdBoundTooSmall(bound))
}

fn hom_from_projectives(mult: &[usize], n: &Module) -> usize {
    mult.iter().zip(n.dims()).map(|(k, d)| k * d).sum()
}

/// `dim Ext^i(M, N)`.
pub fn ext_dim(i: usize, m: &Module, n: &Module) -> Result<usize> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    if i == 0 {
        return hom_dim(m, n);
    }
    let mut prev = m.clone();
    for _ in 1..i {
        prev = syzygy(&prev);
        if prev.is_zero() {
            return Ok(0);
        }
    }
    let pc = projective_cover(&prev);
    let omega = pc.epi.kernel().0;
    let h_omega = hom_dim(&omega, n)?;
    let h_prev = hom_dim(&prev, n)?;
    Ok(h_omega + h_prev - hom_from_projectives(&pc.multiplicities, n))
}

/// `Ext^i(M, N)` for every `1 <= i <= max`.
pub fn ext_all_vanish(m: &Module, n: &Module, max: usize) -> Result<bool> {
    let mut prev = m.clone();
    for _ in 1..=max {
        if prev.is_zero() {
            return Ok(true);
        }
        let pc = projective_cover(&prev);
        let omega = pc.epi.kernel().0;
        let e =
            hom_dim(&omega, n)? + hom_dim(&prev, n)? - hom_from_projectives(&pc.multiplicities, n);
        if e != 0 {
            return Ok(false);
        }
        prev = omega;
    }
    Ok(true)
}

/// Dimension of `K (x)_B L` for a right `B`-module `K` and a right `B^op`-module `L`
/// (that is, a left `B`-module).
pub fn tensor_dim(k: &Module, l: &Module) -> Result<usize> {
    let b = k.algebra();
    if !super::same_algebra(l.algebra_arc(), &b.opposite_arc()) {
        return Err(Error::AlgebraMismatch);
    }
    let n = b.vertex_count();
    let (dk, dl) = (k.dims(), l.dims());
    let mut off = Vec::with_capacity(n);
    let mut total = 0;
    for v in 0..n {
        off.push(total);
        total += dk[v] * dl[v];
    }
    let mut rows = Vec::new();
    for &g in b.generators() {
        let (v, w) = b.peirce(g);
        let (rk, rl) = (k.block(g), l.block(g));
        for i in 0..dk[v] {
            for j in 0..dl[w] {
                let mut row = vec![Scalar::zero(); total];
                for p in 0..dk[w] {
                    if !rk[(i, p)].is_zero() {
                        row[off[w] + p * dl[w] + j] += &rk[(i, p)];
                    }
                }
                for q in 0..dl[v] {
                    if !rl[(j, q)].is_zero() {
                        row[off[v] + i * dl[v] + q] -= &rl[(j, q)];
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Ok(total - crate::linalg::rank(&Mat::from_rows(total, rows)))
}

/// `dim Tor_i^B(K, L)` for `i >= 1`.
pub fn tor_dim(i: usize, k: &Module, l: &Module) -> Result<usize> {
    if i == 0 {
        return tensor_dim(k, l);
    }
    let mut prev = k.clone();
    for _ in 1..i {
        prev = syzygy(&prev);
    }
    let pc = projective_cover(&prev);
    let omega = pc.epi.kernel().0;
    let p_tensor: usize = pc
        .multiplicities
        .iter()
        .zip(l.dims())
        .map(|(m, d)| m * d)
        .sum();
    Ok(tensor_dim(&omega, l)? + tensor_dim(&prev, l)? - p_tensor)
}

/// Global dimension as the largest projective dimension of a simple module.
pub fn global_dimension(a: &Arc<Algebra>, bound: usize) -> Result<usize> {
    (0..a.vertex_count()).try_fold(0, |acc, v| Ok(acc.max(pd(&Module::simple(a, v), bound)?)))
}
