//! One pass/fail line per acceptance criterion. Runs without the test harness so the
//! lines always show.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use tiltlab::algebra::Algebra;
use tiltlab::json::{algebra_from_json, module_from_json, parse_str};
use tiltlab::lab::{
    enumerate_t_tilting, enumerate_tilting, is_t_resolving, replay, replay_json,
    self_orthogonal_part, subcat_of_t_tilting, verify_in, verify_theorem, AlgebraClass, Setting,
    VerifyConfig,
};
use tiltlab::module::decompose::{decompose, is_isomorphic};
use tiltlab::module::hom::hom_dim;
use tiltlab::module::resolution::{ext_all_vanish, ext_dim, pd, syzygy};
use tiltlab::module::Module;
use tiltlab::tilting::{
    is_partial_tilting, is_t_tilting, is_tilting, minimal_right_approximation, t_pd, AddClass,
};

use common::{corpus_catalogs, corpus_settings, sum, BOUND};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    std::fs::read_to_string(p).unwrap()
}

fn load(alg: &str, modules: &[&str]) -> (Arc<Algebra>, Vec<Module>) {
    let a = Arc::new(algebra_from_json(&parse_str(&data(alg)).unwrap()).unwrap());
    let ms = modules
        .iter()
        .map(|m| module_from_json(&a, &parse_str(&data(m)).unwrap()).unwrap())
        .collect();
    (a, ms)
}

fn ka3_settings() -> Vec<&'static Setting> {
    corpus_settings()
        .iter()
        .filter(|(n, _)| *n == "kA3")
        .map(|(_, s)| s)
        .collect()
}

fn example_setting() -> &'static Setting {
    let s = ka3_settings();
    let (p1, p2, _, t2) = common::example(s[0].cat.algebra());
    let ids = s[0].cat.support(&sum(&[p1, p2, t2])).unwrap();
    s.into_iter().find(|x| x.t == ids).unwrap()
}

fn criterion_1() -> Check {
    let (a, ms) = load("a3.json", &["a3_T.json", "a3_T_prime.json"]);
    let (t, l) = (&ms[0], &ms[1]);
    let (p1, _, t1, t2) = common::example(&a);
    let r = is_tilting(t, BOUND).map_err(|e| e.to_string())?;
    ensure(r.verdict, || format!("T rejected: {:?}", r.reason))?;
    let r = is_t_tilting(t, l, BOUND).map_err(|e| e.to_string())?;
    ensure(r.verdict, || format!("T' rejected: {:?}", r.reason))?;
    let c = r.coresolution.ok_or("no witness coresolution")?;
    ensure(c.len() == 1 && c.is_exact(), || {
        format!("witness of length {}", c.len())
    })?;
    let middle = sum(&[p1.clone(), p1, t2.clone(), t2]);
    ensure(is_isomorphic(&c.terms[0], &middle).unwrap(), || {
        format!("middle term {:?}", c.terms[0].dims())
    })?;
    ensure(is_isomorphic(&c.terms[1], &t1).unwrap(), || {
        "last term is not T_1".into()
    })
}

fn criterion_2() -> Check {
    let cat = &corpus_catalogs()[1].1;
    let mut dims: Vec<Vec<usize>> = cat.modules().iter().map(|m| m.dims().to_vec()).collect();
    dims.sort();
    let figure = [
        [0, 0, 1],
        [0, 1, 0],
        [0, 1, 1],
        [1, 0, 0],
        [1, 1, 0],
        [1, 1, 1],
    ];
    ensure(dims == figure, || format!("dimension vectors {dims:?}"))?;
    let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = (0..cat.len())
        .filter_map(|x| {
            cat.quiver.tau[x]
                .map(|t| (cat.module(x).dims().to_vec(), cat.module(t).dims().to_vec()))
        })
        .collect();
    pairs.sort();
    let meshes = vec![
        (vec![0, 1, 0], vec![0, 0, 1]),
        (vec![1, 0, 0], vec![0, 1, 0]),
        (vec![1, 1, 0], vec![0, 1, 1]),
    ];
    ensure(pairs == meshes, || format!("tau pairs {pairs:?}"))
}

fn criterion_3() -> Check {
    for s in ka3_settings() {
        for &i in &s.a_ambient {
            for &j in &s.a_ambient {
                let r = s
                    .bundle
                    .miyashita_check(s.cat.module(i), s.cat.module(j), 3)
                    .map_err(|e| e.to_string())?;
                ensure(r.passed(), || {
                    format!("T={:?} ({i},{j}): {:?}", s.t, r.mismatches)
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    for s in ka3_settings() {
        for &i in &s.a_ambient {
            let (lhs, rhs) = s
                .bundle
                .tpd_transport_check(s.cat.module(i), BOUND)
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || {
                format!("T={:?} M={i}: {lhs:?} vs {rhs:?}", s.t)
            })?;
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let (a, ms) = load("a3.json", &["a3_T.json"]);
    let cert =
        verify_theorem(1, &a, &ms[0], &VerifyConfig::default()).map_err(|e| e.to_string())?;
    ensure(cert.passed, || format!("{:?}", cert.failures))?;
    // Regression constant fixed by the enumeration.
    ensure(cert.left.len() == 3 && cert.right.len() == 3, || {
        format!("sizes {} and {}", cert.left.len(), cert.right.len())
    })?;
    let r = replay_json(&cert.to_json()).map_err(|e| e.to_string())?;
    ensure(r.passed() && r.checked_maps > 0, || {
        format!("replay: {:?}", r.failures)
    })
}

fn criterion_6() -> Check {
    let mut sizes = Vec::new();
    for s in ka3_settings() {
        let cert = verify_in(3, s, &VerifyConfig::default(), None).map_err(|e| e.to_string())?;
        ensure(cert.passed, || format!("T={:?}: {:?}", s.t, cert.failures))?;
        ensure(
            cert.pairing.len() == cert.left.len() && cert.left.len() == cert.right.len(),
            || format!("T={:?}: not a bijection", s.t),
        )?;
        ensure(replay(&cert).passed(), || {
            format!("T={:?}: replay failed", s.t)
        })?;
        sizes.push(cert.left.len());
    }
    // Regression constants, one per tilting module in enumeration order.
    ensure(sizes == [21, 15, 11, 7, 11], || format!("sizes {sizes:?}"))
}

fn criterion_7() -> Check {
    for s in ka3_settings() {
        let mut seen = Vec::new();
        for l in enumerate_t_tilting(&s.cat, &s.t).map_err(|e| e.to_string())? {
            let sub = subcat_of_t_tilting(&s.cat, &s.t, &l).map_err(|e| e.to_string())?;
            let r = is_t_resolving(&s.cat, &s.t, &sub.spec, 0, 20).map_err(|e| e.to_string())?;
            ensure(r.verdict, || format!("T={:?} L={l:?}: {r:?}", s.t))?;
            ensure(sub.inside_finite_tpd, || {
                format!("T={:?} L={l:?}: infinite T-pd member", s.t)
            })?;
            let core = self_orthogonal_part(&s.cat, &sub.spec.members);
            ensure(core == l, || {
                format!("T={:?} L={l:?}: U meet U-perp is {core:?}", s.t)
            })?;
            ensure(!seen.contains(&sub.spec.members), || {
                format!("T={:?} L={l:?}: repeated", s.t)
            })?;
            seen.push(sub.spec.members);
        }
    }
    let cert = verify_in(5, example_setting(), &VerifyConfig::default(), None)
        .map_err(|e| e.to_string())?;
    ensure(cert.passed && replay(&cert).passed(), || {
        format!("{:?}", cert.failures)
    })
}

fn criterion_8() -> Check {
    for s in ka3_settings() {
        let tm = s.cat.sum(&s.t);
        let mut expected = Vec::new();
        for x in enumerate_tilting(&s.cat).map_err(|e| e.to_string())? {
            if ext_all_vanish(&tm, &s.cat.sum(&x), BOUND).map_err(|e| e.to_string())? {
                expected.push(x);
            }
        }
        let got = enumerate_t_tilting(&s.cat, &s.t).map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("T={:?}: {got:?} vs {expected:?}", s.t)
        })?;
    }
    let (a, ms) = load("replicated_a2.json", &["replicated_a2_regular.json"]);
    let cfg = VerifyConfig {
        class: Some(AlgebraClass::Replicated),
        ..VerifyConfig::default()
    };
    let cert = verify_theorem(2, &a, &ms[0], &cfg).map_err(|e| e.to_string())?;
    ensure(cert.passed, || format!("{:?}", cert.failures))?;
    // Regression constants.
    ensure(cert.left.len() == 9 && cert.right.len() == 9, || {
        format!("sizes {} and {}", cert.left.len(), cert.right.len())
    })?;
    ensure(replay(&cert).passed(), || "replay failed".into())
}

/// Compact, exhaustive versions of the property suites over the whole corpus.
fn criterion_9() -> Check {
    for (name, cat) in corpus_catalogs() {
        let n = cat.len();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (cat.module(i), cat.module(j));
                for k in [i, j] {
                    let z = cat.module(k);
                    let h = hom_dim(&sum(&[x.clone(), y.clone()]), z).unwrap();
                    ensure(h == hom_dim(x, z).unwrap() + hom_dim(y, z).unwrap(), || {
                        format!("{name}: Hom additivity")
                    })?;
                }
                for d in 1..=2 {
                    let shifted = ext_dim(d, &syzygy(x), y).unwrap();
                    ensure(ext_dim(d + 1, x, y).unwrap() == shifted, || {
                        format!("{name}: Ext shift ({i},{j})")
                    })?;
                }
            }
            let m = sum(&[cat.module(i).clone(), cat.module((i + 1) % n).clone()]);
            let dec = decompose(&m, 0).unwrap();
            ensure(dec.summands.len() == 2 && dec.iso(&m).is_iso(), || {
                format!("{name}: decomposition of {i}")
            })?;
        }
        ensure(cat.quiver.meshes_hold(), || format!("{name}: mesh"))?;
    }
    for (name, s) in corpus_settings() {
        let tm = s.cat.sum(&s.t);
        let add_t =
            AddClass::from_indecomposables(s.t.iter().map(|&i| s.cat.module(i).clone()).collect());
        for l in enumerate_t_tilting(&s.cat, &s.t).unwrap() {
            ensure(
                is_partial_tilting(&s.cat.sum(&l), BOUND).unwrap().verdict,
                || format!("{name}: L={l:?} not partial tilting"),
            )?;
        }
        for &i in &s.a_ambient {
            let m = s.cat.module(i);
            ensure(
                pd(m, BOUND).is_ok() == t_pd(&tm, m, BOUND).unwrap().is_some(),
                || format!("{name}: pd vs T-pd at {i}"),
            )?;
            let ap = minimal_right_approximation(m, &add_t).unwrap();
            let (k, _) = ap.map.kernel();
            ensure(
                ap.map.is_surjective() && tiltlab::tilting::in_right_perp(&tm, &k, BOUND).unwrap(),
                || format!("{name}: approximation sequence at {i}"),
            )?;
        }
        let cert = verify_in(4, s, &VerifyConfig::default(), None).unwrap();
        for e in &cert.extensional {
            ensure(e.lhs == e.rhs, || {
                format!("{name}: T={:?} {} of {:?}", s.t, e.name, e.subcategory)
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("worked example", criterion_1),
        ("AR quiver of kA3", criterion_2),
        ("Hom and Ext transport", criterion_3),
        ("T-pd transport", criterion_4),
        ("correspondence 1 certificate", criterion_5),
        ("correspondence 3 for every T", criterion_6),
        ("T-tilting subcategories", criterion_7),
        ("hereditary collapse and replicated kA2", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", k + 1),
            Err(e) => {
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
