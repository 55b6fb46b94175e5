use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{int, Scalar, Subspace};
use crate::module::decompose::multiplicity;
use crate::module::hom::{combine, hom_basis, hom_dim};
use crate::module::{Module, Morphism};
use crate::tilting::{cores_dim, minimal_right_approximation, res_dim, AddClass};

use super::catalog::Catalog;

/// A full additive subcategory of an enumerated ambient, given by the indices of
/// its indecomposables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SubcategorySpec {
    pub ambient: Vec<usize>,
    pub members: Vec<usize>,
}

impl SubcategorySpec {
    pub fn new(ambient: Vec<usize>, members: Vec<usize>) -> Result<SubcategorySpec> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        if let Some(m) = members.iter().find(|m| !ambient.contains(m)) {
            return Err(Error::PreconditionFail(format!(
                "member {m} is not in the ambient"
            )));
        }
        Ok(SubcategorySpec { ambient, members })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    fn in_ambient(&self, i: usize) -> bool {
        self.ambient.contains(&i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelFailure {
    pub source: Vec<usize>,
    pub target: usize,
    pub kernel: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionFailure {
    pub left: usize,
    pub right: usize,
    /// Multiplicity of each ambient module in the middle term.
    pub middle: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvingReport {
    pub verdict: bool,
    pub missing_generators: Vec<usize>,
    pub kernel_failures: Vec<KernelFailure>,
    pub extension_failures: Vec<ExtensionFailure>,
    pub seed: u64,
    pub samples: usize,
}

/// Random morphisms in the span of `basis`: dense combinations alternate with
/// combinations supported on a random subset of the basis, so that special
/// strata of the Hom space are also visited.
fn sample_maps(
    basis: &[Morphism],
    src: &Module,
    tgt: &Module,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Vec<Morphism> {
    if basis.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Morphism> = basis.to_vec();
    for s in 0..samples {
        let coeffs: Vec<Scalar> = basis
            .iter()
            .map(|_| {
                if s % 2 == 1 && rng.gen_bool(0.5) {
                    int(0)
                } else {
                    int(rng.gen_range(-5..=5))
                }
            })
            .collect();
        out.push(combine(basis, &coeffs, src, tgt));
    }
    out
}

fn fits(small: &[usize], big: &[usize]) -> bool {
    small.iter().zip(big).all(|(a, b)| a <= b)
}

/// Multisets of `ambient` modules whose dimension vectors add up to `dims`.
fn middle_terms(cat: &Catalog, ambient: &[usize], dims: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(
        cat: &Catalog,
        ambient: &[usize],
        k: usize,
        rest: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rest.iter().all(|&d| d == 0) {
            out.push(cur.clone());
            return;
        }
        if k == ambient.len() {
            return;
        }
        go(cat, ambient, k + 1, rest, cur, out);
        let d = cat.module(ambient[k]).dims();
        if d.iter().all(|&x| x == 0) {
            return;
        }
        let mut mult = 0;
        while fits(d, rest) {
            for (r, x) in rest.iter_mut().zip(d) {
                *r -= x;
            }
            mult += 1;
            cur.push((ambient[k], mult));
            go(cat, ambient, k + 1, rest, cur, out);
            cur.pop();
        }
        for (r, x) in rest.iter_mut().zip(d) {
            *r += mult * x;
        }
    }
    let mut out = Vec::new();
    go(
        cat,
        ambient,
        0,
        &mut dims.to_vec(),
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn expand(parts: &[(usize, usize)]) -> Vec<usize> {
    parts
        .iter()
        .flat_map(|&(i, k)| std::iter::repeat_n(i, k))
        .collect()
}

/// Checks the three defining conditions of a `T`-resolving subcategory of the
/// ambient, with closure properties tested on seeded random morphisms.
///
/// Kernels are tested for epimorphisms from sums of at most two members onto a
/// member; extensions for every ordered pair of members with nonvanishing
/// `Ext^1` and every ambient middle term of the right dimension vector.
pub fn is_t_resolving(
    cat: &Catalog,
    t: &[usize],
    s: &SubcategorySpec,
    seed: u64,
    samples: usize,
) -> Result<ResolvingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let missing_generators: Vec<usize> = t.iter().copied().filter(|&i| !s.contains(i)).collect();
    let mut kernel_failures = Vec::new();
    let mut extension_failures = Vec::new();

    let mut sources: Vec<Vec<usize>> = s.members.iter().map(|&i| vec![i]).collect();
    for (a, &i) in s.members.iter().enumerate() {
        for &j in &s.members[a..] {
            sources.push(vec![i, j]);
        }
    }
    'kernels: for src_ids in &sources {
        let src = cat.sum(src_ids);
        for &tgt_id in &s.members {
            let tgt = cat.module(tgt_id);
            if !fits(tgt.dims(), src.dims()) || src.dim() == tgt.dim() {
                continue;
            }
            let basis = hom_basis(&src, tgt)?;
            for f in sample_maps(&basis, &src, tgt, &mut rng, samples) {
                if !f.is_surjective() {
                    continue;
                }
                let k = f.kernel().0;
                let support = cat.support(&k)?;
                if support.iter().all(|&i| s.in_ambient(i))
                    && !support.iter().all(|&i| s.contains(i))
                {
                    kernel_failures.push(KernelFailure {
                        source: src_ids.clone(),
                        target: tgt_id,
                        kernel: support,
                    });
                    break 'kernels;
                }
            }
        }
    }

    'extensions: for &l in &s.members {
        for &r in &s.members {
            if cat.ext_zero(r, l) {
                continue;
            }
            let (ul, ur) = (cat.module(l), cat.module(r));
            let dims: Vec<usize> = ul
                .dims()
                .iter()
                .zip(ur.dims())
                .map(|(a, b)| a + b)
                .collect();
            for middle in middle_terms(cat, &s.ambient, &dims) {
                if middle.iter().all(|&(i, _)| s.contains(i)) {
                    continue;
                }
                let e = cat.sum(&expand(&middle));
                let basis = hom_basis(ul, &e)?;
                for f in sample_maps(&basis, ul, &e, &mut rng, samples) {
                    if !f.is_injective() {
                        continue;
                    }
                    let c = f.cokernel().0;
                    if c.dims() == ur.dims() && multiplicity(ur, &c)? == 1 {
                        extension_failures.push(ExtensionFailure {
                            left: l,
                            right: r,
                            middle,
                        });
                        break 'extensions;
                    }
                }
            }
        }
    }

    Ok(ResolvingReport {
        verdict: missing_generators.is_empty()
            && kernel_failures.is_empty()
            && extension_failures.is_empty(),
        missing_generators,
        kernel_failures,
        extension_failures,
        seed,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproximationWitness {
    pub module: usize,
    /// Multiplicity of each member in the approximating object.
    pub exponents: Vec<usize>,
    pub contract_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContravariantReport {
    pub verdict: bool,
    pub witnesses: Vec<ApproximationWitness>,
}

/// Whether `f: U' -> M` induces surjections `Hom(U, U') -> Hom(U, M)` for every
/// listed `U`.
pub fn approximation_contract(f: &Morphism, class: &[Module]) -> Result<bool> {
    let (obj, m) = (f.source(), f.target());
    for u in class {
        let target = hom_dim(u, m)?;
        let len: usize = u.dims().iter().zip(m.dims()).map(|(a, b)| a * b).sum();
        let images: Vec<Vec<Scalar>> = hom_basis(u, obj)?
            .iter()
            .map(|h| h.then(f).expect("composable").flatten())
            .collect();
        if Subspace::span(len, &images).dim() != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal right approximations of every ambient module by the members, each
/// checked against the approximation contract.
pub fn is_t_contravariantly_finite(
    cat: &Catalog,
    s: &SubcategorySpec,
) -> Result<ContravariantReport> {
    let class: Vec<Module> = s.members.iter().map(|&i| cat.module(i).clone()).collect();
    let add = AddClass::from_indecomposables(class.clone());
    let mut witnesses = Vec::with_capacity(s.ambient.len());
    for &m in &s.ambient {
        let ap = minimal_right_approximation(cat.module(m), &add)?;
        let contract_holds = approximation_contract(&ap.map, &class)?;
        witnesses.push(ApproximationWitness {
            module: m,
            exponents: ap.exponents(class.len()),
            contract_holds,
        });
    }
    Ok(ContravariantReport {
        verdict: witnesses.iter().all(|w| w.contract_holds),
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiltingSubcategory {
    pub spec: SubcategorySpec,
    /// Every member has finite T-projective dimension.
    pub inside_finite_tpd: bool,
}

/// Members of `ambient` admitting a finite `add L`-coresolution.
pub fn coresolvable(cat: &Catalog, ambient: &[usize], l: &[usize]) -> Result<Vec<usize>> {
    let add_l = AddClass::from_indecomposables(l.iter().map(|&i| cat.module(i).clone()).collect());
    let mut out = Vec::new();
    for &m in ambient {
        if cores_dim(&add_l, cat.module(m), cat.bound)?.is_some() {
            out.push(m);
        }
    }
    Ok(out)
}

/// The subcategory of `T^perp` of modules with a finite `add L`-coresolution.
pub fn subcat_of_t_tilting(cat: &Catalog, t: &[usize], l: &[usize]) -> Result<TiltingSubcategory> {
    let ambient = cat.right_perp(t);
    let members = coresolvable(cat, &ambient, l)?;
    let add_t = AddClass::from_indecomposables(t.iter().map(|&i| cat.module(i).clone()).collect());
    let mut inside_finite_tpd = true;
    for &m in &members {
        if res_dim(&add_t, cat.module(m), cat.bound)?.is_none() {
            inside_finite_tpd = false;
        }
    }
    Ok(TiltingSubcategory {
        spec: SubcategorySpec::new(ambient, members)?,
        inside_finite_tpd,
    })
}

/// `U ∩ U^perp` on member lists.
pub fn self_orthogonal_part(cat: &Catalog, members: &[usize]) -> Vec<usize> {
    members
        .iter()
        .copied()
        .filter(|&m| members.iter().all(|&u| cat.ext_zero(u, m)))
        .collect()
}

/// Every `T`-resolving subcategory of the ambient, as member lists containing `t`.
pub fn enumerate_t_resolving(
    cat: &Catalog,
    t: &[usize],
    ambient: &[usize],
    seed: u64,
    samples: usize,
) -> Result<Vec<Vec<usize>>> {
    let free: Vec<usize> = ambient.iter().copied().filter(|i| !t.contains(i)).collect();
    if free.len() > 20 {
        return Err(Error::CapExceeded(free.len()));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << free.len()) {
        let mut members: Vec<usize> = t.to_vec();
        members.extend(
            free.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &i)| i),
        );
        let spec = SubcategorySpec::new(ambient.to_vec(), members)?;
        if is_t_resolving(cat, t, &spec, seed, samples)?.verdict {
            out.push(spec.members);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_path_algebra, Quiver};
    use std::sync::Arc;

    fn setup() -> (Catalog, Vec<usize>) {
        let a = Arc::new(build_path_algebra(&Quiver::linear(3)).unwrap());
        let c = Catalog::new(&a, 50, 12, 0).unwrap();
        let idx = |m: Module| c.index_of(&m).unwrap().unwrap();
        let mut t = vec![
            idx(Module::projective(&a, 0)),
            idx(Module::projective(&a, 1)),
            idx(Module::simple(&a, 1)),
        ];
        t.sort();
        (c, t)
    }

    #[test]
    fn whole_perp_is_resolving() {
        let (c, t) = setup();
        let amb = c.right_perp(&t);
        let s = SubcategorySpec::new(amb.clone(), amb).unwrap();
        assert!(is_t_resolving(&c, &t, &s, 0, 20).unwrap().verdict);
        assert!(is_t_contravariantly_finite(&c, &s).unwrap().verdict);
    }

    #[test]
    fn missing_kernel_is_detected() {
        // Over kA3 with T = A, the epi P_0 -> S_0 has kernel P_1.
        let a = Arc::new(build_path_algebra(&Quiver::linear(3)).unwrap());
        let c = Catalog::new(&a, 50, 12, 0).unwrap();
        let proj = c.projectives();
        let idx = |m: Module| c.index_of(&m).unwrap().unwrap();
        let (p1, s0, s1, i1) = (
            idx(Module::projective(&a, 1)),
            idx(Module::simple(&a, 0)),
            idx(Module::simple(&a, 1)),
            idx(Module::injective(&a, 1)),
        );
        let amb: Vec<usize> = (0..c.len()).collect();
        let members: Vec<usize> = amb.iter().copied().filter(|&i| i != p1).collect();
        let s = SubcategorySpec::new(amb.clone(), members).unwrap();
        let r = is_t_resolving(&c, &proj, &s, 0, 20).unwrap();
        assert!(!r.verdict);
        assert!(r.missing_generators.contains(&p1));
        // I_1 -> S_0 is onto with kernel S_1.
        let mut members = proj.clone();
        members.extend([i1, s0]);
        let r = is_t_resolving(
            &c,
            &proj,
            &SubcategorySpec::new(amb.clone(), members).unwrap(),
            0,
            20,
        )
        .unwrap();
        assert!(r.missing_generators.is_empty());
        assert!(!r.kernel_failures.is_empty());
        // A non-split extension of S_0 by S_1 has middle term I_1.
        let mut members = proj.clone();
        members.extend([s0, s1]);
        let r = is_t_resolving(
            &c,
            &proj,
            &SubcategorySpec::new(amb, members).unwrap(),
            0,
            20,
        )
        .unwrap();
        assert_eq!(r.extension_failures.len(), 1);
        assert_eq!(r.extension_failures[0].middle, vec![(i1, 1)]);
    }

    #[test]
    fn tilting_subcategory_recovers_l() {
        let (c, t) = setup();
        let u = subcat_of_t_tilting(&c, &t, &t).unwrap();
        assert!(u.inside_finite_tpd);
        assert!(t.iter().all(|i| u.spec.contains(*i)));
        assert_eq!(self_orthogonal_part(&c, &u.spec.members), t);
    }

    #[test]
    fn empty_members_give_zero_approximations() {
        let (c, t) = setup();
        let s = SubcategorySpec::new(c.right_perp(&t), vec![]).unwrap();
        let r = is_t_contravariantly_finite(&c, &s).unwrap();
        assert!(r.verdict);
        assert!(r.witnesses.iter().all(|w| w.exponents.is_empty()));
    }
}
