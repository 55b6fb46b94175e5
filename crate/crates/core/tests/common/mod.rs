#![allow(dead_code)]

use std::sync::Arc;

use tiltlab::algebra::{
    build_bound_quiver_algebra, build_path_algebra, build_replicated_algebra, Algebra,
    BoundQuiverPresentation, Quiver, Relation,
};
use tiltlab::lab::Catalog;
use tiltlab::linalg::int;
use tiltlab::module::Module;
use tiltlab::Mat;

pub const BOUND: usize = 12;

pub fn ka2() -> Arc<Algebra> {
    Arc::new(build_path_algebra(&Quiver::linear(2)).unwrap())
}

/// 0 -> 1 -> 2.
pub fn ka3() -> Arc<Algebra> {
    Arc::new(build_path_algebra(&Quiver::linear(3)).unwrap())
}

/// 0 -> 1 <- 2.
pub fn ka3_sink() -> Arc<Algebra> {
    Arc::new(build_path_algebra(&Quiver::new(3, &[(0, 1, "a"), (2, 1, "c")])).unwrap())
}

/// 0 -> 1 -> 2 with the length-two path set to zero.
pub fn ka3_zero() -> Arc<Algebra> {
    let p = BoundQuiverPresentation {
        quiver: Quiver::linear(3),
        relations: vec![Relation {
            terms: vec![(int(1), vec!["a1".into(), "a2".into()])],
        }],
    };
    Arc::new(build_bound_quiver_algebra(&p).unwrap())
}

pub fn replicated_ka2() -> Arc<Algebra> {
    let h = build_path_algebra(&Quiver::linear(2)).unwrap();
    Arc::new(build_replicated_algebra(&h, 1).unwrap())
}

/// The corpus every property suite runs over.
pub fn corpus() -> Vec<(&'static str, Arc<Algebra>)> {
    vec![
        ("kA2", ka2()),
        ("kA3", ka3()),
        ("kA3 sink", ka3_sink()),
        ("kA3/(ab)", ka3_zero()),
        ("replicated kA2", replicated_ka2()),
    ]
}

pub fn catalog(a: &Arc<Algebra>) -> Catalog {
    Catalog::new(a, 200, BOUND, 0).unwrap()
}

/// The interval module with one-dimensional spaces at vertices `lo..=hi` of a linear
/// quiver and identity maps along the arrows inside the interval.
pub fn interval(a: &Arc<Algebra>, n: usize, lo: usize, hi: usize) -> Module {
    let dims: Vec<usize> = (0..n).map(|v| usize::from(lo <= v && v <= hi)).collect();
    let arrows = (0..n - 1)
        .map(|i| {
            if lo <= i && i < hi {
                Mat::identity(1)
            } else {
                Mat::zeros(dims[i], dims[i + 1])
            }
        })
        .collect();
    Module::from_representation(a.clone(), dims, arrows).unwrap()
}

pub fn intervals(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|lo| (lo..n).map(move |hi| (lo, hi)))
        .collect()
}

/// `P_1, P_2, T_1, T_2` of the running kA3 example.
pub fn example(a: &Arc<Algebra>) -> (Module, Module, Module, Module) {
    (
        Module::projective(a, 0),
        Module::projective(a, 1),
        interval(a, 3, 0, 1),
        Module::simple(a, 1),
    )
}

pub fn sum(parts: &[Module]) -> Module {
    Module::direct_sum(parts).unwrap()
}

/// Unit lower times unit upper triangular, so always invertible.
fn invertible(d: usize, coeffs: &mut impl Iterator<Item = i64>) -> Mat {
    let mut l = Mat::identity(d);
    let mut u = Mat::identity(d);
    for i in 0..d {
        for j in 0..i {
            l[(i, j)] = int(coeffs.next().unwrap_or(1));
            u[(j, i)] = int(coeffs.next().unwrap_or(-1));
        }
    }
    l.mul(&u)
}

/// An isomorphic copy of `m` with the basis changed at every vertex. Modules without
/// an arrow presentation come back unchanged.
pub fn rebase(m: &Module, coeffs: &[i64]) -> Module {
    let a = m.algebra_arc().clone();
    let (Some(pd), Some(arrows)) = (a.path_data(), m.arrow_matrices()) else {
        return m.clone();
    };
    let mut it = coeffs.iter().copied().cycle();
    let g: Vec<Mat> = m.dims().iter().map(|&d| invertible(d, &mut it)).collect();
    let moved = pd
        .quiver
        .arrows
        .iter()
        .zip(&arrows)
        .map(|(ar, x)| g[ar.src].inverse().unwrap().mul(x).mul(&g[ar.tgt]))
        .collect();
    Module::from_representation(a, m.dims().to_vec(), moved).unwrap()
}

/// Catalogs of the corpus, built once per test binary.
pub fn corpus_catalogs() -> &'static [(&'static str, Catalog)] {
    static CELL: std::sync::OnceLock<Vec<(&'static str, Catalog)>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        corpus()
            .into_iter()
            .map(|(n, a)| (n, catalog(&a)))
            .collect()
    })
}

/// The transport setting for every tilting module of every corpus algebra.
pub fn corpus_settings() -> &'static [(&'static str, tiltlab::lab::Setting)] {
    static CELL: std::sync::OnceLock<Vec<(&'static str, tiltlab::lab::Setting)>> =
        std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = tiltlab::lab::VerifyConfig::default();
        let mut out = Vec::new();
        for (name, cat) in corpus_catalogs() {
            for t in tiltlab::lab::enumerate_tilting(cat).unwrap() {
                out.push((
                    *name,
                    tiltlab::lab::Setting::new(cat.clone(), &t, &cfg).unwrap(),
                ));
            }
        }
        out
    })
}
