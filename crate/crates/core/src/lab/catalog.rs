use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::module::ar::{knit, ArQuiver};
use crate::module::decompose::multiplicity;
use crate::module::hom::hom_dim;
use crate::module::resolution::{ext_all_vanish, pd};
use crate::module::Module;

/// The indecomposables of a representation-finite algebra with cached
/// homological data. Subsets of modules are referred to by sorted index lists.
#[derive(Clone, Debug)]
pub struct Catalog {
    algebra: Arc<Algebra>,
    pub quiver: ArQuiver,
    pub bound: usize,
    pd: Vec<Option<usize>>,
    hom: Vec<Vec<usize>>,
    /// `ext_zero[i][j]`: `Ext^k(X_i, X_j) = 0` for `1 <= k <= pd X_i` (or `bound`).
    ext_zero: Vec<Vec<bool>>,
}

impl Catalog {
    pub fn new(a: &Arc<Algebra>, cap: usize, bound: usize, seed: u64) -> Result<Catalog> {
        let quiver = knit(a, cap, seed)?;
        let n = quiver.len();
        let pd: Vec<Option<usize>> = quiver
            .modules
            .iter()
            .map(|m| match pd(m, bound) {
                Ok(p) => Ok(Some(p)),
                Err(Error::PdBoundTooSmall(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<_>>()?;
        let mut hom = vec![vec![0; n]; n];
        let mut ext_zero = vec![vec![true; n]; n];
        for i in 0..n {
            let depth = pd[i].unwrap_or(bound);
            for j in 0..n {
                let (x, y) = (&quiver.modules[i], &quiver.modules[j]);
                hom[i][j] = hom_dim(x, y)?;
                ext_zero[i][j] = ext_all_vanish(x, y, depth)?;
            }
        }
        Ok(Catalog {
            algebra: a.clone(),
            quiver,
            bound,
            pd,
            hom,
            ext_zero,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.quiver.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quiver.is_empty()
    }

    pub fn module(&self, i: usize) -> &Module {
        &self.quiver.modules[i]
    }

    pub fn modules(&self) -> &[Module] {
        &self.quiver.modules
    }

    pub fn pd(&self, i: usize) -> Option<usize> {
        self.pd[i]
    }

    pub fn hom(&self, i: usize, j: usize) -> usize {
        self.hom[i][j]
    }

    pub fn ext_zero(&self, i: usize, j: usize) -> bool {
        self.ext_zero[i][j]
    }

    pub fn rigid(&self, i: usize) -> bool {
        self.ext_zero[i][i]
    }

    /// The two-sided vanishing used by subset searches.
    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.ext_zero[i][j] && self.ext_zero[j][i]
    }

    /// Direct sum of the listed indecomposables; the zero module for an empty list.
    pub fn sum(&self, ids: &[usize]) -> Module {
        if ids.is_empty() {
            return Module::zero(self.algebra().clone());
        }
        let parts: Vec<Module> = ids.iter().map(|&i| self.module(i).clone()).collect();
        Module::direct_sum(&parts).expect("catalog modules share an algebra")
    }

    /// Multiplicity of every catalog module in `m`.
    pub fn decompose(&self, m: &Module) -> Result<Vec<usize>> {
        let mut mult = Vec::with_capacity(self.len());
        let mut total = 0;
        for x in self.modules() {
            let fits = x.dims().iter().zip(m.dims()).all(|(a, b)| a <= b);
            let k = if fits && !x.is_zero() {
                multiplicity(x, m)?
            } else {
                0
            };
            total += k * x.dim();
            mult.push(k);
        }
        if total != m.dim() {
            return Err(Error::PreconditionFail(
                "module has summands outside the catalog".into(),
            ));
        }
        Ok(mult)
    }

    /// Indices of the distinct summands of `m`.
    pub fn support(&self, m: &Module) -> Result<Vec<usize>> {
        Ok(self
            .decompose(m)?
            .iter()
            .enumerate()
            .filter(|(_, k)| **k > 0)
            .map(|(i, _)| i)
            .collect())
    }

    pub fn index_of(&self, m: &Module) -> Result<Option<usize>> {
        for (i, x) in self.modules().iter().enumerate() {
            if x.dims() == m.dims() && multiplicity(x, m)? == 1 {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `X_j` with `Ext^{>0}(X_i, X_j) = 0` for every listed `i`.
    pub fn right_perp(&self, ids: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| ids.iter().all(|&i| self.ext_zero[i][j]))
            .collect()
    }

    /// `X_i` with `Ext^{>0}(X_i, X_j) = 0` for every listed `j`.
    pub fn left_perp(&self, ids: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| ids.iter().all(|&j| self.ext_zero[i][j]))
            .collect()
    }

    pub fn projectives(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.quiver.projective[i])
            .collect()
    }

    pub fn injectives(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.quiver.injective[i])
            .collect()
    }
}

/// All subsets of `cands` (in increasing order) of size `size`, or of every size
/// when `size` is `None`, whose members are pairwise related by `ok`.
pub fn cliques(
    cands: &[usize],
    size: Option<usize>,
    ok: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    fn grow(
        cands: &[usize],
        start: usize,
        cur: &mut Vec<usize>,
        size: Option<usize>,
        ok: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        match size {
            Some(s) if cur.len() == s => {
                out.push(cur.clone());
                return;
            }
            None if !cur.is_empty() => out.push(cur.clone()),
            _ => {}
        }
        for k in start..cands.len() {
            let c = cands[k];
            if cur.iter().all(|&x| ok(x, c)) {
                cur.push(c);
                grow(cands, k + 1, cur, size, ok, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(cands, 0, &mut Vec::new(), size, ok, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_path_algebra, Quiver};

    #[test]
    fn a3_catalog_tables() {
        let a = Arc::new(build_path_algebra(&Quiver::linear(3)).unwrap());
        let c = Catalog::new(&a, 50, 12, 0).unwrap();
        assert_eq!(c.len(), 6);
        assert!((0..6).all(|i| c.pd(i).is_some_and(|p| p <= 1)));
        assert!((0..6).all(|i| c.rigid(i)));
        // Every module is in the right perp of the regular module.
        assert_eq!(c.right_perp(&c.projectives()).len(), 6);
        let s1 = c.index_of(&Module::simple(&a, 1)).unwrap().unwrap();
        let s2 = c.index_of(&Module::simple(&a, 2)).unwrap().unwrap();
        // Ext^1(S_1, S_2) != 0 for the arrow 1 -> 2.
        assert!(!c.ext_zero(s1, s2));
        let sum = c.sum(&[s1, s2]);
        assert_eq!(c.support(&sum).unwrap(), {
            let mut v = vec![s1, s2];
            v.sort();
            v
        });
    }

    #[test]
    fn clique_search() {
        let all = cliques(&[0, 1, 2, 3], Some(2), &|a, b| (a + b) % 2 == 1);
        assert_eq!(all, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        assert_eq!(cliques(&[0, 1, 2], None, &|_, _| true).len(), 7);
    }
}
