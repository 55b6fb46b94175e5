use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Origin};
use crate::error::{Error, Result};
use crate::json::algebra_to_raw_json;
use crate::module::resolution::{id, projective_sum};
use crate::module::Module;
use crate::tilting::{coresolve, is_tilting, res_dim, AddClass};
use crate::transport::{endomorphism_algebra_of, DtBundle, EndAlgebraBundle};

use super::catalog::Catalog;
use super::cert::{
    CertConfig, CertEntry, Certificate, ExtensionalCheck, MapWitness, ModulePair, RawModule,
    SequenceWitness, CERT_SCHEMA,
};
use super::enumerate::{enumerate_partial_tilting, enumerate_t_tilting, enumerate_tilting};
use super::subcat::{
    coresolvable, enumerate_t_resolving, is_t_contravariantly_finite, self_orthogonal_part,
    subcat_of_t_tilting, SubcategorySpec,
};

/// Algebra classes over which tilting and T-tilting modules in `T^perp` coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraClass {
    Gorenstein,
    Replicated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub cap: usize,
    pub bound: usize,
    pub seed: u64,
    pub samples: usize,
    pub class: Option<AlgebraClass>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cap: 200,
            bound: 12,
            seed: 0,
            samples: 20,
            class: None,
        }
    }
}

fn finite(r: Result<usize>) -> Result<Option<usize>> {
    match r {
        Ok(p) => Ok(Some(p)),
        Err(Error::PdBoundTooSmall(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Injective dimension of the regular module as a right and as a left module.
pub fn gorenstein_probe(a: &Arc<Algebra>, bound: usize) -> Result<(Option<usize>, Option<usize>)> {
    let ones = vec![1; a.vertex_count()];
    let right = finite(id(&projective_sum(a, &ones), bound))?;
    let left = finite(id(&projective_sum(&a.opposite_arc(), &ones), bound))?;
    Ok((right, left))
}

pub fn is_one_gorenstein(probe: (Option<usize>, Option<usize>)) -> bool {
    matches!(probe, (Some(r), Some(l)) if r <= 1 && l <= 1)
}

/// Both sides of the transport along a tilting module `T`: the catalogs of `A` and
/// `B = End T`, the ambients `T^perp` and `^perp(DT)`, and the index map induced by
/// `Hom(T, -)`.
pub struct Setting {
    pub cat: Catalog,
    pub t: Vec<usize>,
    pub bundle: EndAlgebraBundle,
    pub b_cat: Catalog,
    pub dt: DtBundle,
    pub a_ambient: Vec<usize>,
    pub b_ambient: Vec<usize>,
    forward: Vec<Option<usize>>,
    pub failures: Vec<String>,
}

impl Setting {
    pub fn new(cat: Catalog, t: &[usize], cfg: &VerifyConfig) -> Result<Setting> {
        let mut t = t.to_vec();
        t.sort_unstable();
        t.dedup();
        if !is_tilting(&cat.sum(&t), cfg.bound)?.verdict {
            return Err(Error::PreconditionFail("T is not a tilting module".into()));
        }
        let bundle = endomorphism_algebra_of(t.iter().map(|&i| cat.module(i).clone()).collect())?;
        let b_cat = Catalog::new(&bundle.b, cfg.cap, cfg.bound, cfg.seed)?;
        let dt = bundle.dual_dt(cfg.bound)?;
        let mut b_ambient = Vec::new();
        for j in 0..b_cat.len() {
            if dt.in_left_perp(b_cat.module(j))? {
                b_ambient.push(j);
            }
        }
        let a_ambient = cat.right_perp(&t);
        let mut forward = vec![None; cat.len()];
        let mut failures = Vec::new();
        for &i in &a_ambient {
            let h = bundle.hom_functor_module(cat.module(i))?;
            match b_cat.index_of(&h)? {
                Some(j) if b_ambient.contains(&j) => forward[i] = Some(j),
                Some(j) => failures.push(format!(
                    "Hom(T, X{i}) = Y{j} lies outside the left perp of DT"
                )),
                None => failures.push(format!("Hom(T, X{i}) is not an indecomposable B-module")),
            }
        }
        let mut image: Vec<usize> = forward.iter().flatten().copied().collect();
        image.sort_unstable();
        image.dedup();
        if image != b_ambient {
            failures.push(format!(
                "Hom(T, -) maps T^perp onto {image:?}, not onto the left perp of DT {b_ambient:?}"
            ));
        }
        Ok(Setting {
            cat,
            t,
            bundle,
            b_cat,
            dt,
            a_ambient,
            b_ambient,
            forward,
            failures,
        })
    }

    pub fn to_b(&self, ids: &[usize]) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = ids
            .iter()
            .map(|&i| self.forward.get(i).copied().flatten())
            .collect::<Option<_>>()?;
        out.sort_unstable();
        Some(out)
    }

    pub fn to_a(&self, ids: &[usize]) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = ids
            .iter()
            .map(|&j| self.forward.iter().position(|f| *f == Some(j)))
            .collect::<Option<_>>()?;
        out.sort_unstable();
        Some(out)
    }

    fn module_pairs(&self) -> Result<Vec<ModulePair>> {
        let mut out = Vec::new();
        for &i in &self.a_ambient {
            let Some(j) = self.forward[i] else { continue };
            let m = self.cat.module(i);
            let h = self.bundle.hom_functor(m)?;
            let tens = self.bundle.tensor_functor(&h.module)?;
            let counit = self.bundle.counit(m, &h, &tens);
            let back = self.bundle.hom_functor(&tens.module)?;
            let unit = self.bundle.unit(&h.module, &tens, &back);
            out.push(ModulePair {
                a_index: i,
                b_index: j,
                a_module: RawModule::of("A", m),
                b_module: RawModule::of("B", &h.module),
                counit: MapWitness::of("A", &counit),
                unit: MapWitness::of("B", &unit),
            });
        }
        Ok(out)
    }
}

/// Matches every left entry with the right entry it maps to, recording anything
/// that keeps the matching from being a bijection.
fn pair_lists(
    left: &[Vec<usize>],
    right: &[Vec<usize>],
    map: impl Fn(&[usize]) -> Option<Vec<usize>>,
    failures: &mut Vec<String>,
) -> Vec<(usize, usize)> {
    if left.len() != right.len() {
        failures.push(format!(
            "lists have {} and {} entries",
            left.len(),
            right.len()
        ));
    }
    let mut pairing = Vec::new();
    let mut hit = vec![0usize; right.len()];
    for (i, l) in left.iter().enumerate() {
        match map(l).and_then(|img| right.iter().position(|r| *r == img)) {
            Some(j) => {
                hit[j] += 1;
                pairing.push((i, j));
            }
            None => failures.push(format!("left entry {l:?} has no partner")),
        }
    }
    for (j, &k) in hit.iter().enumerate() {
        if k != 1 {
            failures.push(format!("right entry {:?} is hit {k} times", right[j]));
        }
    }
    pairing
}

fn check_class(
    a: &Arc<Algebra>,
    cfg: &VerifyConfig,
    probe: (Option<usize>, Option<usize>),
) -> Result<()> {
    match cfg.class {
        Some(AlgebraClass::Replicated) => {
            if !matches!(a.origin(), Origin::Replicated { .. }) {
                return Err(Error::PreconditionFail(
                    "algebra was not built as a replicated algebra".into(),
                ));
            }
        }
        Some(AlgebraClass::Gorenstein) | None => {
            if !is_one_gorenstein(probe) {
                return Err(Error::PreconditionFail(format!(
                    "1-Gorenstein probe failed: injective dimensions of the regular module {probe:?}"
                )));
            }
        }
    }
    Ok(())
}

/// Runs the verification of correspondence `theorem` (1 to 6) for the tilting
/// module `t` over `a`.
pub fn verify_theorem(
    theorem: u8,
    a: &Arc<Algebra>,
    t: &Module,
    cfg: &VerifyConfig,
) -> Result<Certificate> {
    if !(1..=6).contains(&theorem) {
        return Err(Error::PreconditionFail(format!(
            "no correspondence numbered {theorem}"
        )));
    }
    let mut probe = None;
    if matches!(theorem, 2 | 6) {
        let p = gorenstein_probe(a, cfg.bound)?;
        check_class(a, cfg, p)?;
        probe = Some(p);
    }
    let cat = Catalog::new(a, cfg.cap, cfg.bound, cfg.seed)?;
    let t_ids = cat.support(t)?;
    let setting = Setting::new(cat, &t_ids, cfg)?;
    verify_in(theorem, &setting, cfg, probe)
}

/// As [`verify_theorem`] on a prepared setting.
pub fn verify_in(
    theorem: u8,
    s: &Setting,
    cfg: &VerifyConfig,
    probe: Option<(Option<usize>, Option<usize>)>,
) -> Result<Certificate> {
    let mut failures = s.failures.clone();
    let mut extensional = Vec::new();
    let mut sequences = Vec::new();
    let b_in_perp = |x: &Vec<usize>| x.iter().all(|j| s.b_ambient.contains(j));
    let a_in_perp = |x: &Vec<usize>| x.iter().all(|i| s.a_ambient.contains(i));

    let (left_kind, right_kind, left, right, pairing) = match theorem {
        1 | 2 => {
            let left = if theorem == 1 {
                enumerate_t_tilting(&s.cat, &s.t)?
            } else {
                enumerate_tilting(&s.cat)?
                    .into_iter()
                    .filter(a_in_perp)
                    .collect()
            };
            let right: Vec<Vec<usize>> = enumerate_tilting(&s.b_cat)?
                .into_iter()
                .filter(b_in_perp)
                .collect();
            let pairing = pair_lists(&left, &right, |l| s.to_b(l), &mut failures);
            let kind = if theorem == 1 {
                "t-tilting A-modules in T^perp"
            } else {
                "tilting A-modules in T^perp"
            };
            (
                kind,
                "tilting B-modules in the left perp of DT",
                left,
                right,
                pairing,
            )
        }
        3 => {
            let left = enumerate_partial_tilting(&s.cat, &s.a_ambient);
            let right = enumerate_partial_tilting(&s.b_cat, &s.b_ambient);
            let pairing = pair_lists(&left, &right, |l| s.to_b(l), &mut failures);
            (
                "partial tilting A-modules in T^perp",
                "partial tilting B-modules in the left perp of DT",
                left,
                right,
                pairing,
            )
        }
        4 => {
            let left = enumerate_t_resolving(&s.cat, &s.t, &s.a_ambient, cfg.seed, cfg.samples)?;
            let b_proj = s.b_cat.projectives();
            let right =
                enumerate_t_resolving(&s.b_cat, &b_proj, &s.b_ambient, cfg.seed, cfg.samples)?;
            for (cat, amb, list) in [
                (&s.cat, &s.a_ambient, &left),
                (&s.b_cat, &s.b_ambient, &right),
            ] {
                for members in list {
                    let spec = SubcategorySpec::new(amb.clone(), members.clone())?;
                    if !is_t_contravariantly_finite(cat, &spec)?.verdict {
                        failures.push(format!("approximation contract fails for {members:?}"));
                    }
                }
            }
            let pairing = pair_lists(&left, &right, |l| s.to_b(l), &mut failures);
            let all_b: Vec<usize> = (0..s.b_cat.len()).collect();
            for x in &right {
                let Some(x_a) = s.to_a(x) else { continue };
                let check = coresolvable(&s.b_cat, &all_b, x)?;
                let lhs = if b_in_perp(&check) {
                    s.to_a(&check).unwrap_or_default()
                } else {
                    vec![usize::MAX]
                };
                let rhs = coresolvable(&s.cat, &s.a_ambient, &x_a)?;
                extensional.push(ExtensionalCheck {
                    name: "coresolving hull".into(),
                    subcategory: x.clone(),
                    lhs,
                    rhs,
                });
                let perp_b: Vec<usize> = s
                    .b_cat
                    .right_perp(x)
                    .into_iter()
                    .filter(|j| s.b_ambient.contains(j))
                    .collect();
                let lhs = s.to_a(&perp_b).unwrap_or_default();
                let rhs: Vec<usize> = s
                    .cat
                    .right_perp(&x_a)
                    .into_iter()
                    .filter(|i| s.a_ambient.contains(i))
                    .collect();
                extensional.push(ExtensionalCheck {
                    name: "right perp".into(),
                    subcategory: x.clone(),
                    lhs,
                    rhs,
                });
            }
            for x in &extensional {
                if x.lhs != x.rhs {
                    failures.push(format!(
                        "{} of {:?}: {:?} over B, {:?} over A",
                        x.name, x.subcategory, x.lhs, x.rhs
                    ));
                }
            }
            (
                "T-resolving T-contravariantly finite subcategories of T^perp",
                "resolving contravariantly finite subcategories of the left perp of DT",
                left,
                right,
                pairing,
            )
        }
        _ => {
            let left = if theorem == 5 {
                enumerate_t_tilting(&s.cat, &s.t)?
            } else {
                enumerate_tilting(&s.cat)?
                    .into_iter()
                    .filter(a_in_perp)
                    .collect()
            };
            let add_t = AddClass::from_indecomposables(
                s.t.iter().map(|&i| s.cat.module(i).clone()).collect(),
            );
            let mut right = Vec::new();
            for u in enumerate_t_resolving(&s.cat, &s.t, &s.a_ambient, cfg.seed, cfg.samples)? {
                let mut inside = true;
                for &m in &u {
                    inside &= res_dim(&add_t, s.cat.module(m), cfg.bound)?.is_some();
                }
                if inside {
                    right.push(u);
                }
            }
            let mut images = Vec::new();
            for l in &left {
                let u = subcat_of_t_tilting(&s.cat, &s.t, l)?;
                if !u.inside_finite_tpd {
                    failures.push(format!("subcategory of {l:?} leaves the finite T-pd part"));
                }
                if self_orthogonal_part(&s.cat, &u.spec.members) != *l {
                    failures.push(format!("U ∩ U^perp differs from add {l:?}"));
                }
                images.push(u.spec.members);
            }
            let pairing = pair_lists(
                &left,
                &right,
                |l| left.iter().position(|x| x == l).map(|k| images[k].clone()),
                &mut failures,
            );
            for (p, &(i, j)) in pairing.iter().enumerate() {
                let add_l = AddClass::from_indecomposables(
                    left[i].iter().map(|&k| s.cat.module(k).clone()).collect(),
                );
                for &m in &right[j] {
                    match coresolve(s.cat.module(m), &add_l, cfg.bound + 1)? {
                        Some(c) if c.is_exact() && !c.maps.is_empty() => {
                            let mut terms = vec![RawModule::of("A", s.cat.module(m))];
                            terms.extend(c.terms.iter().map(|x| RawModule::of("A", x)));
                            sequences.push(SequenceWitness {
                                pair: p,
                                module: m,
                                terms,
                                maps: c.maps.iter().map(|f| f.matrix()).collect(),
                            });
                        }
                        _ => failures.push(format!(
                            "no add L coresolution of X{m} for L = {:?}",
                            left[i]
                        )),
                    }
                }
            }
            let kind = if theorem == 5 {
                "t-tilting A-modules in T^perp"
            } else {
                "tilting A-modules in T^perp"
            };
            (
                kind,
                "T-resolving T-contravariantly finite subcategories inside finite T-pd",
                left,
                right,
                pairing,
            )
        }
    };

    let entries = |v: &[Vec<usize>]| {
        v.iter()
            .map(|ids| CertEntry {
                ids: ids.clone(),
                verdict: true,
            })
            .collect::<Vec<_>>()
    };
    Ok(Certificate {
        schema: CERT_SCHEMA.to_string(),
        theorem,
        config: CertConfig {
            seed: cfg.seed,
            samples: cfg.samples,
            pd_bound: cfg.bound,
            cap: cfg.cap,
            class: cfg.class.map(|c| format!("{c:?}").to_lowercase()),
            gorenstein_probe: probe,
        },
        algebra: algebra_to_raw_json(s.cat.algebra()),
        end_algebra: algebra_to_raw_json(&s.bundle.b),
        tilting: s.t.clone(),
        a_ambient: s.a_ambient.clone(),
        b_ambient: s.b_ambient.clone(),
        left_kind: left_kind.into(),
        right_kind: right_kind.into(),
        left: entries(&left),
        right: entries(&right),
        pairing,
        module_pairs: s.module_pairs()?,
        sequences,
        extensional,
        passed: failures.is_empty(),
        failures,
    })
}
