mod common;

use std::sync::Arc;

use proptest::prelude::*;
use tiltlab::module::ar::tau;
use tiltlab::module::decompose::{decompose, is_indecomposable, is_isomorphic};
use tiltlab::module::hom::hom_dim;
use tiltlab::module::resolution::{ext_dim, global_dimension, is_projective, pd, syzygy};

use common::{catalog, corpus_catalogs, interval, intervals, sum, BOUND};

#[test]
fn indecomposable_counts() {
    // kA_n has n(n+1)/2 intervals; the zero relation removes the long one; the
    // replicated kA2 is kA4 modulo the path of length three.
    let expected = [3, 6, 6, 5, 9];
    for ((name, cat), n) in corpus_catalogs().iter().zip(expected) {
        assert_eq!(cat.len(), n, "{name}");
        for m in cat.modules() {
            assert!(is_indecomposable(m).unwrap());
        }
    }
}

#[test]
fn hom_between_intervals() {
    // Hom([a,b],[c,d]) is one-dimensional exactly when c <= a <= d <= b.
    for n in [3, 4] {
        let a = Arc::new(
            tiltlab::algebra::build_path_algebra(&tiltlab::algebra::Quiver::linear(n)).unwrap(),
        );
        for &(a0, b0) in &intervals(n) {
            for &(c0, d0) in &intervals(n) {
                let expected = usize::from(c0 <= a0 && a0 <= d0 && d0 <= b0);
                let got = hom_dim(&interval(&a, n, a0, b0), &interval(&a, n, c0, d0)).unwrap();
                assert_eq!(got, expected, "n={n} [{a0},{b0}] -> [{c0},{d0}]");
            }
        }
    }
}

#[test]
fn ext_between_intervals() {
    // tau[a,b] = [a+1,b+1] for non-projective intervals, and Ext^1(M,N) = D Hom(N, tau M).
    let n = 3;
    let a = common::ka3();
    for &(a0, b0) in &intervals(n) {
        for &(c0, d0) in &intervals(n) {
            let expected = usize::from(b0 + 1 < n && a0 < c0 && c0 <= b0 + 1 && b0 < d0);
            let (m, x) = (interval(&a, n, a0, b0), interval(&a, n, c0, d0));
            assert_eq!(
                ext_dim(1, &m, &x).unwrap(),
                expected,
                "[{a0},{b0}] by [{c0},{d0}]"
            );
            assert_eq!(ext_dim(2, &m, &x).unwrap(), 0);
        }
    }
}

#[test]
fn global_dimensions() {
    assert_eq!(global_dimension(&common::ka3(), BOUND).unwrap(), 1);
    assert_eq!(global_dimension(&common::ka3_zero(), BOUND).unwrap(), 2);
    assert_eq!(
        global_dimension(&common::replicated_ka2(), BOUND).unwrap(),
        2
    );
}

#[test]
fn mesh_relations() {
    for (name, cat) in corpus_catalogs() {
        let q = &cat.quiver;
        for x in 0..q.len() {
            let Some(t) = q.tau[x] else {
                assert!(
                    q.projective[x],
                    "{name}: non-projective {x} without translate"
                );
                continue;
            };
            let nv = cat.module(x).dims().len();
            let mut lhs: Vec<usize> = (0..nv)
                .map(|v| cat.module(x).dims()[v] + cat.module(t).dims()[v])
                .collect();
            for &(from, to, mult) in &q.arrows {
                if to == x {
                    for v in 0..nv {
                        lhs[v] -= mult * cat.module(from).dims()[v];
                    }
                }
            }
            assert!(lhs.iter().all(|&d| d == 0), "{name}: mesh ending at {x}");
            assert!(is_isomorphic(&tau(cat.module(x)), cat.module(t)).unwrap());
        }
    }
}

#[test]
fn ar_formula_on_hereditary_algebras() {
    for a in [common::ka2(), common::ka3(), common::ka3_sink()] {
        let cat = catalog(&a);
        for (i, m) in cat.modules().iter().enumerate() {
            if is_projective(m) {
                continue;
            }
            let tm = tau(m);
            for (j, n) in cat.modules().iter().enumerate() {
                assert_eq!(
                    ext_dim(1, m, n).unwrap(),
                    hom_dim(n, &tm).unwrap(),
                    "({i},{j})"
                );
            }
        }
    }
}

fn pick() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (0usize..5, 0usize..9, 0usize..9, 0usize..9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hom_is_additive((k, i, j, l) in pick()) {
        let cat = &corpus_catalogs()[k].1;
        let n = cat.len();
        let (x, y, z) = (cat.module(i % n), cat.module(j % n), cat.module(l % n));
        let xy = sum(&[x.clone(), y.clone()]);
        prop_assert_eq!(hom_dim(&xy, z).unwrap(), hom_dim(x, z).unwrap() + hom_dim(y, z).unwrap());
        prop_assert_eq!(hom_dim(z, &xy).unwrap(), hom_dim(z, x).unwrap() + hom_dim(z, y).unwrap());
    }

    #[test]
    fn ext_degree_shift((k, i, j, _) in pick(), deg in 1usize..3) {
        let cat = &corpus_catalogs()[k].1;
        let n = cat.len();
        let (x, y) = (cat.module(i % n), cat.module(j % n));
        prop_assert_eq!(ext_dim(deg + 1, x, y).unwrap(), ext_dim(deg, &syzygy(x), y).unwrap());
    }

    #[test]
    fn decomposition_roundtrip(
        k in 0usize..5,
        picks in proptest::collection::vec(0usize..9, 1..5),
        coeffs in proptest::collection::vec(-2i64..=2, 1..12),
    ) {
        let cat = &corpus_catalogs()[k].1;
        let mut expected: Vec<usize> = picks.iter().map(|p| p % cat.len()).collect();
        expected.sort();
        let parts: Vec<_> = expected.iter().map(|&i| cat.module(i).clone()).collect();
        let m = common::rebase(&sum(&parts), &coeffs);
        let d = decompose(&m, 0).unwrap();
        let iso = d.iso(&m);
        prop_assert!(iso.intertwines() && iso.is_iso());
        let mut found: Vec<usize> = d.summands.iter().map(|s| cat.index_of(s).unwrap().expect("summand is listed")).collect();
        found.sort();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn resolutions_agree_on_isomorphic_inputs(
        (k, i, j, _) in pick(),
        coeffs in proptest::collection::vec(-2i64..=2, 1..12),
    ) {
        let cat = &corpus_catalogs()[k].1;
        let n = cat.len();
        let m = sum(&[cat.module(i % n).clone(), cat.module(j % n).clone()]);
        let m2 = common::rebase(&m, &coeffs);
        prop_assert!(is_isomorphic(&syzygy(&m), &syzygy(&m2)).unwrap());
        prop_assert_eq!(pd(&m, BOUND).unwrap(), pd(&m2, BOUND).unwrap());
    }
}
