mod common;

use proptest::prelude::*;
use tiltlab::lab::{approximation_contract, enumerate_t_tilting, enumerate_tilting, Catalog};
use tiltlab::module::decompose::{decompose, is_isomorphic};
use tiltlab::module::morphism::from_components_out;
use tiltlab::module::resolution::{ext_dim, pd};
use tiltlab::module::Module;
use tiltlab::tilting::{
    in_right_perp, is_partial_tilting, is_t_tilting, is_tilting, minimal_right_approximation, t_pd,
    AddClass, Reason,
};

use common::{corpus_catalogs, example, sum, BOUND};

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Over a hereditary algebra a rigid module with as many summands as simples is tilting.
fn hereditary_oracle(cat: &Catalog) -> Vec<Vec<usize>> {
    let n = cat.algebra().vertex_count();
    let mut out: Vec<Vec<usize>> = subsets(cat.len(), n)
        .into_iter()
        .filter(|s| {
            s.iter().all(|&i| {
                s.iter()
                    .all(|&j| ext_dim(1, cat.module(i), cat.module(j)).unwrap() == 0)
            })
        })
        .collect();
    out.sort();
    out
}

#[test]
fn worked_example() {
    let a = common::ka3();
    let (p1, p2, t1, t2) = example(&a);
    let t = sum(&[p1.clone(), p2, t2.clone()]);
    let r = is_tilting(&t, BOUND).unwrap();
    assert!(r.verdict);
    assert_eq!(r.pd, Some(1));
    let l = sum(&[p1.clone(), t1.clone(), t2.clone()]);
    let r = is_t_tilting(&t, &l, BOUND).unwrap();
    assert!(r.verdict);
    let c = r.coresolution.unwrap();
    assert_eq!(c.len(), 1);
    assert!(c.is_exact());
    assert!(is_isomorphic(&c.terms[0], &sum(&[p1.clone(), p1, t2.clone(), t2])).unwrap());
    assert!(is_isomorphic(&c.terms[1], &t1).unwrap());
    // S_3 lies outside T^perp.
    assert!(
        !is_t_tilting(&t, &Module::simple(&a, 2), BOUND)
            .unwrap()
            .verdict
    );
}

#[test]
fn hereditary_enumeration_matches_rigidity_oracle() {
    for (name, cat) in &corpus_catalogs()[..3] {
        assert_eq!(
            enumerate_tilting(cat).unwrap(),
            hereditary_oracle(cat),
            "{name}"
        );
    }
    assert_eq!(enumerate_tilting(&corpus_catalogs()[1].1).unwrap().len(), 5);
}

#[test]
fn delta_counts_simples() {
    for (name, cat) in corpus_catalogs() {
        for s in enumerate_tilting(cat).unwrap() {
            let r = is_tilting(&cat.sum(&s), BOUND).unwrap();
            assert!(r.verdict);
            assert_eq!(r.delta, cat.algebra().vertex_count(), "{name}");
        }
    }
}

#[test]
fn too_few_summands_are_rejected() {
    for (name, cat) in corpus_catalogs() {
        for i in 0..cat.len() {
            if cat.algebra().vertex_count() > 1 {
                let r = is_tilting(cat.module(i), BOUND).unwrap();
                assert!(!r.verdict, "{name}: {i}");
                assert!(matches!(
                    r.reason,
                    Some(
                        Reason::DeltaMismatch
                            | Reason::CoresolutionFail
                            | Reason::RigidityFail
                            | Reason::PdFail
                    )
                ));
            }
        }
    }
}

#[test]
fn t_tilting_modules_are_partial_tilting() {
    for (name, cat) in corpus_catalogs() {
        for t in enumerate_tilting(cat).unwrap() {
            let tm = cat.sum(&t);
            for l in enumerate_t_tilting(cat, &t).unwrap() {
                let lm = cat.sum(&l);
                assert!(
                    is_partial_tilting(&lm, BOUND).unwrap().verdict,
                    "{name}: T={t:?} L={l:?}"
                );
                assert!(is_t_tilting(&tm, &lm, BOUND).unwrap().verdict);
            }
        }
    }
}

#[test]
fn finite_pd_iff_finite_t_pd() {
    for (name, cat) in corpus_catalogs() {
        for t in enumerate_tilting(cat).unwrap() {
            let tm = cat.sum(&t);
            for m in cat.right_perp(&t) {
                let x = cat.module(m);
                let finite_pd = pd(x, BOUND).is_ok();
                assert_eq!(
                    finite_pd,
                    t_pd(&tm, x, BOUND).unwrap().is_some(),
                    "{name}: T={t:?} M={m}"
                );
            }
        }
    }
}

#[test]
fn approximations_by_t_have_kernels_in_the_perp() {
    for (name, cat) in corpus_catalogs() {
        for t in enumerate_tilting(cat).unwrap() {
            let tm = cat.sum(&t);
            let add_t =
                AddClass::from_indecomposables(t.iter().map(|&i| cat.module(i).clone()).collect());
            for m in cat.right_perp(&t) {
                let ap = minimal_right_approximation(cat.module(m), &add_t).unwrap();
                assert!(ap.map.is_surjective(), "{name}: T={t:?} M={m}");
                let (k, _) = ap.map.kernel();
                assert!(
                    in_right_perp(&tm, &k, BOUND).unwrap(),
                    "{name}: T={t:?} M={m}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn approximations_are_minimal(k in 0usize..5, m in 0usize..9, class in proptest::collection::vec(0usize..9, 1..4)) {
        let cat = &corpus_catalogs()[k].1;
        let n = cat.len();
        let mut ids: Vec<usize> = class.iter().map(|&c| c % n).collect();
        ids.sort();
        ids.dedup();
        let gens: Vec<Module> = ids.iter().map(|&i| cat.module(i).clone()).collect();
        let target = cat.module(m % n);
        let ap = minimal_right_approximation(target, &AddClass::from_indecomposables(gens.clone())).unwrap();
        prop_assert!(approximation_contract(&ap.map, &gens).unwrap());
        if ap.object.is_zero() {
            return Ok(());
        }
        let d = decompose(&ap.object, 0).unwrap();
        for drop in 0..d.summands.len() {
            let keep: Vec<usize> = (0..d.summands.len()).filter(|&i| i != drop).collect();
            let parts: Vec<Module> = keep.iter().map(|&i| d.summands[i].clone()).collect();
            let smaller = if parts.is_empty() { Module::zero(target.algebra_arc().clone()) } else { sum(&parts) };
            let maps: Vec<_> = keep.iter().map(|&i| d.inclusions[i].then(&ap.map).unwrap()).collect();
            let f = from_components_out(&smaller, target, &maps);
            prop_assert!(!approximation_contract(&f, &gens).unwrap(), "summand {} is redundant", drop);
        }
    }
}
