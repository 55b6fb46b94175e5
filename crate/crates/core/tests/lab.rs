mod common;

use std::collections::BTreeSet;

use tiltlab::lab::{
    enumerate_t_tilting, enumerate_tilting, is_t_contravariantly_finite, is_t_resolving, replay,
    replay_json, self_orthogonal_part, subcat_of_t_tilting, verify_in, Certificate,
    SubcategorySpec, VerifyConfig,
};
use tiltlab::module::resolution::ext_all_vanish;

use common::{corpus_settings, BOUND};

fn ids(entries: &[tiltlab::lab::CertEntry]) -> Vec<Vec<usize>> {
    entries.iter().map(|e| e.ids.clone()).collect()
}

fn cfg() -> VerifyConfig {
    VerifyConfig::default()
}

/// Settings where correspondences 2 and 6 apply: hereditary inputs and the replicated algebra.
fn gorenstein_like(name: &str) -> bool {
    name != "kA3/(ab)"
}

#[test]
fn correspondence_1_lists() {
    for (name, s) in corpus_settings() {
        let cert = verify_in(1, s, &cfg(), None).unwrap();
        assert!(cert.passed, "{name}: T={:?}: {:?}", s.t, cert.failures);
        assert_eq!(ids(&cert.left), enumerate_t_tilting(&s.cat, &s.t).unwrap());
        let mut right: Vec<Vec<usize>> = enumerate_tilting(&s.b_cat)
            .unwrap()
            .into_iter()
            .filter(|x| {
                x.iter()
                    .all(|&j| s.dt.in_left_perp(s.b_cat.module(j)).unwrap())
            })
            .collect();
        right.sort();
        let mut got = ids(&cert.right);
        got.sort();
        assert_eq!(got, right, "{name}");
        assert_eq!(cert.pairing.len(), cert.left.len());
        assert!(replay(&cert).passed());
    }
}

#[test]
fn hereditary_collapse() {
    for (name, s) in corpus_settings()
        .iter()
        .filter(|(n, _)| ["kA2", "kA3", "kA3 sink"].contains(n))
    {
        let tm = s.cat.sum(&s.t);
        let expected: Vec<Vec<usize>> = enumerate_tilting(&s.cat)
            .unwrap()
            .into_iter()
            .filter(|x| ext_all_vanish(&tm, &s.cat.sum(x), BOUND).unwrap())
            .collect();
        assert_eq!(
            enumerate_t_tilting(&s.cat, &s.t).unwrap(),
            expected,
            "{name}: T={:?}",
            s.t
        );
    }
}

#[test]
fn every_correspondence_replays() {
    for (name, s) in corpus_settings() {
        for th in 1..=6u8 {
            if matches!(th, 2 | 6) && !gorenstein_like(name) {
                continue;
            }
            let mut c = cfg();
            if s.cat.algebra().path_data().is_none() {
                c.class = Some(tiltlab::lab::AlgebraClass::Replicated);
            }
            let cert = verify_in(th, s, &c, None).unwrap();
            assert!(
                cert.passed,
                "{name}: T={:?} thm {th}: {:?}",
                s.t, cert.failures
            );
            assert_eq!(cert.left.len(), cert.right.len());
            let back = Certificate::from_json(&cert.to_json()).unwrap();
            let r = replay_json(&back.to_json()).unwrap();
            assert!(r.passed(), "{name}: T={:?} thm {th}: {:?}", s.t, r.failures);
        }
    }
}

#[test]
fn coresolving_hulls_and_perps_transport() {
    for (name, s) in corpus_settings() {
        let cert = verify_in(4, s, &cfg(), None).unwrap();
        assert!(!cert.extensional.is_empty());
        for e in &cert.extensional {
            assert_eq!(
                e.lhs, e.rhs,
                "{name}: T={:?} {} of {:?}",
                s.t, e.name, e.subcategory
            );
        }
    }
}

#[test]
fn t_tilting_subcategories() {
    for (name, s) in corpus_settings() {
        let mut seen = BTreeSet::new();
        for l in enumerate_t_tilting(&s.cat, &s.t).unwrap() {
            let sub = subcat_of_t_tilting(&s.cat, &s.t, &l).unwrap();
            assert!(sub.inside_finite_tpd, "{name}: L={l:?}");
            let r = is_t_resolving(&s.cat, &s.t, &sub.spec, 0, 20).unwrap();
            assert!(r.verdict, "{name}: T={:?} L={l:?}: {r:?}", s.t);
            assert!(
                is_t_contravariantly_finite(&s.cat, &sub.spec)
                    .unwrap()
                    .verdict
            );
            assert_eq!(self_orthogonal_part(&s.cat, &sub.spec.members), l);
            assert!(
                seen.insert(sub.spec.members.clone()),
                "{name}: L={l:?} repeats a member set"
            );
        }
    }
}

#[test]
fn the_whole_perp_is_resolving_and_smaller_sets_are_caught() {
    for (name, s) in corpus_settings() {
        let whole = SubcategorySpec::new(s.a_ambient.clone(), s.a_ambient.clone()).unwrap();
        assert!(
            is_t_resolving(&s.cat, &s.t, &whole, 0, 20).unwrap().verdict,
            "{name}"
        );
        let only: Vec<usize> = s.t.iter().skip(1).copied().collect();
        let missing = SubcategorySpec::new(s.a_ambient.clone(), only).unwrap();
        let r = is_t_resolving(&s.cat, &s.t, &missing, 0, 20).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.missing_generators, vec![s.t[0]]);
    }
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    let (_, s) = &corpus_settings()[2];
    let a = verify_in(5, s, &cfg(), None).unwrap();
    let b = verify_in(5, s, &VerifyConfig { seed: 11, ..cfg() }, None).unwrap();
    assert_eq!(ids(&a.left), ids(&b.left));
    assert_eq!(ids(&a.right), ids(&b.right));
    let again = verify_in(5, s, &cfg(), None).unwrap();
    assert_eq!(a.to_json(), again.to_json());
}
