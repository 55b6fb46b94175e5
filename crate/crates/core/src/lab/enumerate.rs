use crate::error::Result;
use crate::tilting::{is_t_tilting, is_tilting, res_dim, AddClass};

use super::catalog::{cliques, Catalog};

/// Rigid indecomposables of finite projective dimension, restricted to `within`.
fn partial_candidates(cat: &Catalog, within: &[usize]) -> Vec<usize> {
    within
        .iter()
        .copied()
        .filter(|&i| cat.pd(i).is_some() && cat.rigid(i))
        .collect()
}

/// Every basic tilting module, as sorted index sets.
pub fn enumerate_tilting(cat: &Catalog) -> Result<Vec<Vec<usize>>> {
    let n = cat.algebra().vertex_count();
    let all: Vec<usize> = (0..cat.len()).collect();
    let cands = partial_candidates(cat, &all);
    let mut out = Vec::new();
    for s in cliques(&cands, Some(n), &|a, b| cat.orthogonal(a, b)) {
        if is_tilting(&cat.sum(&s), cat.bound)?.verdict {
            out.push(s);
        }
    }
    Ok(out)
}

/// Every basic partial tilting module with all summands in `within`.
pub fn enumerate_partial_tilting(cat: &Catalog, within: &[usize]) -> Vec<Vec<usize>> {
    let cands = partial_candidates(cat, within);
    cliques(&cands, None, &|a, b| cat.orthogonal(a, b))
}

/// Every basic T-tilting module for the tilting module with summands `t`.
pub fn enumerate_t_tilting(cat: &Catalog, t: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = cat.algebra().vertex_count();
    let add_t = AddClass::from_indecomposables(t.iter().map(|&i| cat.module(i).clone()).collect());
    let ambient = cat.right_perp(t);
    let mut cands = Vec::new();
    for i in partial_candidates(cat, &ambient) {
        if res_dim(&add_t, cat.module(i), cat.bound)?.is_some() {
            cands.push(i);
        }
    }
    let tm = cat.sum(t);
    let mut out = Vec::new();
    for s in cliques(&cands, Some(n), &|a, b| cat.orthogonal(a, b)) {
        if is_t_tilting(&tm, &cat.sum(&s), cat.bound)?.verdict {
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_path_algebra, Algebra, Quiver};
    use crate::module::Module;
    use std::sync::Arc;

    #[test]
    fn semisimple_has_one_tilting_module() {
        let a = Arc::new(build_path_algebra(&Quiver::new(2, &[])).unwrap());
        let c = Catalog::new(&a, 10, 12, 0).unwrap();
        let t = enumerate_tilting(&c).unwrap();
        assert_eq!(t, vec![c.projectives()]);
    }

    #[test]
    fn a3_lists_contain_the_example() {
        let a: Arc<Algebra> = Arc::new(build_path_algebra(&Quiver::linear(3)).unwrap());
        let c = Catalog::new(&a, 50, 12, 0).unwrap();
        let idx = |m: Module| c.index_of(&m).unwrap().unwrap();
        let (p0, p1, s1) = (
            idx(Module::projective(&a, 0)),
            idx(Module::projective(&a, 1)),
            idx(Module::simple(&a, 1)),
        );
        let mut t = vec![p0, p1, s1];
        t.sort();
        let tilting = enumerate_tilting(&c).unwrap();
        assert!(tilting.contains(&t));
        assert!(tilting.contains(&c.projectives()));
        let tt = enumerate_t_tilting(&c, &t).unwrap();
        assert!(tt.contains(&t));
    }
}
