//! Hom spaces as null spaces of the intertwining equations.

use num_traits::Zero;

use super::{Module, Morphism};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Scalar};

/// Coefficient matrix of the equations `R_M(g) F_w - F_v R_N(g) = 0` over the generators `g`,
/// in the flattened block coordinates of [`Morphism::flatten`].
fn hom_equations(m: &Module, n: &Module) -> Mat {
    let a = m.algebra();
    let (dm, dn) = (m.dims(), n.dims());
    let mut var_off = Vec::with_capacity(dm.len());
    let mut acc = 0;
    for v in 0..dm.len() {
        var_off.push(acc);
        acc += dm[v] * dn[v];
    }
    let nvars = acc;
    let var = |v: usize, i: usize, j: usize| var_off[v] + i * dn[v] + j;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for &g in a.generators() {
        let (v, w) = a.peirce(g);
        let (rm, rn) = (m.block(g), n.block(g));
        if dm[v] == 0 || dn[w] == 0 {
            continue;
        }
        for i in 0..dm[v] {
            for j in 0..dn[w] {
                let mut row = vec![Scalar::zero(); nvars];
                for k in 0..dm[w] {
                    let c = &rm[(i, k)];
                    if !c.is_zero() {
                        row[var(w, k, j)] += c;
                    }
                }
                for k in 0..dn[v] {
                    let c = &rn[(k, j)];
                    if !c.is_zero() {
                        row[var(v, i, k)] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Mat::from_rows(nvars, rows)
}

fn check_same(m: &Module, n: &Module) -> Result<()> {
    if m.same_algebra(n) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<Morphism>> {
    check_same(m, n)?;
    let eq = hom_equations(m, n);
    Ok(linalg::kernel_basis(&eq)
        .into_iter()
        .map(|v| Morphism::from_flat(m, n, &v))
        .collect())
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    check_same(m, n)?;
    let eq = hom_equations(m, n);
    Ok(eq.cols() - linalg::rank(&eq))
}

pub fn end_basis(m: &Module) -> Vec<Morphism> {
    hom_basis(m, m).expect("same module")
}

/// Linear combination of morphisms with a common source and target.
pub fn combine(
    basis: &[Morphism],
    coeffs: &[Scalar],
    source: &Module,
    target: &Module,
) -> Morphism {
    let mut out = Morphism::zero(source, target);
    for (f, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&f.scale(c));
        }
    }
    out
}

/// Span of a set of morphisms `M -> N` as a subspace of flattened coordinates.
pub fn morphism_span(maps: &[Morphism], m: &Module, n: &Module) -> linalg::Subspace {
    let len: usize = m.dims().iter().zip(n.dims()).map(|(a, b)| a * b).sum();
    linalg::Subspace::span(len, &maps.iter().map(Morphism::flatten).collect::<Vec<_>>())
}
