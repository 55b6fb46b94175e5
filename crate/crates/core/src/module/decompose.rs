//! Krull-Schmidt decomposition over the rationals.
//!
//! Summands are split off with Fitting's lemma applied to endomorphisms that
//! are neither nilpotent nor invertible. Multiplicities of a known
//! indecomposable `X` are computed exactly as the rank of the trace pairing
//! `Hom(X, M) x Hom(M, X) -> End(X)/rad = Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hom::{combine, end_basis, hom_basis};
use super::morphism::from_components_out;
use super::{Module, Morphism};
use crate::error::{Error, Result};
use crate::linalg::{self, int, Mat, Scalar};

const RETRIES: usize = 20;

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Module>,
    /// Split inclusions `X_i -> M`; together they give an isomorphism from the direct sum.
    pub inclusions: Vec<Morphism>,
}

impl Decomposition {
    pub fn iso(&self, m: &Module) -> Morphism {
        let sum = Module::direct_sum(&self.summands).expect("same algebra");
        from_components_out(&sum, m, &self.inclusions)
    }
}

fn trace_of_product(f: &Mat, g: &Mat) -> Scalar {
    let mut t = Scalar::zero();
    for i in 0..f.rows() {
        for k in 0..f.cols() {
            let a = &f[(i, k)];
            if !a.is_zero() {
                t += a * &g[(k, i)];
            }
        }
    }
    t
}

/// `tr(f . g)` for `f: X -> M`, `g: M -> X`, summed over the vertex blocks.
fn pairing(f: &Morphism, g: &Morphism) -> Scalar {
    f.blocks()
        .iter()
        .zip(g.blocks())
        .fold(Scalar::zero(), |acc, (a, b)| acc + trace_of_product(a, b))
}

/// Dimension of `rad End(M)`, from the trace form of `End(M)` acting on `M`.
pub fn end_radical_dim(basis: &[Morphism]) -> usize {
    let n = basis.len();
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = pairing(&basis[i], &basis[j]);
        }
    }
    n - linalg::rank(&g)
}

/// `End(M)/rad` is one-dimensional; in particular `M` is indecomposable with split endomorphism ring.
pub fn has_split_local_end(m: &Module) -> bool {
    if m.is_zero() {
        return false;
    }
    let basis = end_basis(m);
    basis.len() - end_radical_dim(&basis) == 1
}

/// Exact multiplicity of the indecomposable `x` (with split endomorphism ring) as a summand of `m`.
pub fn multiplicity(x: &Module, m: &Module) -> Result<usize> {
    if !x.same_algebra(m) {
        return Err(Error::AlgebraMismatch);
    }
    let into = hom_basis(x, m)?;
    if into.is_empty() {
        return Ok(0);
    }
    let out = hom_basis(m, x)?;
    let mut p = Mat::zeros(into.len(), out.len());
    for (i, f) in into.iter().enumerate() {
        for (j, g) in out.iter().enumerate() {
            p[(i, j)] = pairing(f, g);
        }
    }
    Ok(linalg::rank(&p))
}

/// Characteristic polynomial of a square matrix, coefficients from the constant term up.
pub fn charpoly(m: &Mat) -> Vec<Scalar> {
    // Faddeev-LeVerrier in characteristic zero.
    let n = m.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk = Mat::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        mk = next;
        let c = -m.mul(&mk).trace() / int(k as i64);
        coeffs[n - k] = c;
    }
    coeffs
}

fn small_divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
        if d > 1_000_000 {
            return None;
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn eval(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

/// Rational roots found by the rational root test, when the coefficients are small enough to factor.
pub fn rational_roots(p: &[Scalar]) -> Vec<Scalar> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer())
        .collect();
    let lo = ints.iter().position(|c| !c.is_zero());
    let hi = ints.iter().rposition(|c| !c.is_zero());
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return vec![];
    };
    let mut roots = Vec::new();
    if lo > 0 {
        roots.push(Scalar::zero());
    }
    let (Some(ps), Some(qs)) = (small_divisors(&ints[lo]), small_divisors(&ints[hi])) else {
        return roots;
    };
    for &a in &ps {
        for &b in &qs {
            for s in [1i64, -1] {
                let r = Scalar::new(BigInt::from(s * a), BigInt::from(b));
                if !roots.contains(&r) && eval(p, &r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// Splits `m` along an endomorphism that is neither nilpotent nor invertible.
fn fitting_split(m: &Module, x: &Morphism) -> Option<((Module, Morphism), (Module, Morphism))> {
    let mut y = x.clone();
    let mut r = y.rank();
    loop {
        let y2 = y.then(&y).expect("endomorphism");
        let r2 = y2.rank();
        if r2 == r {
            break;
        }
        y = y2;
        r = r2;
    }
    if r == 0 || r == m.dim() {
        return None;
    }
    Some((y.kernel(), y.image()))
}

fn candidates(m: &Module, basis: &[Morphism], rng: &mut ChaCha8Rng, round: usize) -> Vec<Morphism> {
    let mut xs: Vec<Morphism> = Vec::new();
    if round == 0 {
        xs.extend(basis.iter().cloned());
    } else {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| int(rng.gen_range(-5..=5))).collect();
        xs.push(combine(basis, &coeffs, m, m));
    }
    let mut out = Vec::new();
    for x in xs {
        let roots = rational_roots(&charpoly(&x.matrix()));
        let id = Morphism::identity(m);
        out.push(x.clone());
        for r in roots.into_iter().filter(|r| !r.is_zero()) {
            out.push(x.add(&id.scale(&-r)));
        }
    }
    out
}

/// Decomposes `m` into indecomposable summands.
pub fn decompose(m: &Module, seed: u64) -> Result<Decomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decompose_rec(m, &mut rng)
}

fn decompose_rec(m: &Module, rng: &mut ChaCha8Rng) -> Result<Decomposition> {
    if m.is_zero() {
        return Ok(Decomposition {
            summands: vec![],
            inclusions: vec![],
        });
    }
    let basis = end_basis(m);
    let rad = end_radical_dim(&basis);
    if basis.len() - rad == 1 {
        return Ok(Decomposition {
            summands: vec![m.clone()],
            inclusions: vec![Morphism::identity(m)],
        });
    }
    for round in 0..RETRIES {
        for x in candidates(m, &basis, rng, round) {
            if let Some(((k, ik), (i, ii))) = fitting_split(m, &x) {
                let dk = decompose_rec(&k, rng)?;
                let di = decompose_rec(&i, rng)?;
                let mut summands = dk.summands;
                summands.extend(di.summands);
                let mut inclusions: Vec<Morphism> = dk
                    .inclusions
                    .iter()
                    .map(|f| f.then(&ik).expect("composable"))
                    .collect();
                inclusions.extend(
                    di.inclusions
                        .iter()
                        .map(|f| f.then(&ii).expect("composable")),
                );
                return Ok(Decomposition {
                    summands,
                    inclusions,
                });
            }
        }
    }
    // Every candidate was nilpotent or invertible: the ring is local but not split.
    if basis.iter().all(|f| f.rank() == 0 || f.rank() == m.dim()) {
        return Err(Error::NonSplitEndRing);
    }
    Err(Error::RetryExhausted)
}

pub fn is_indecomposable(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    if has_split_local_end(m) {
        return Ok(true);
    }
    Ok(decompose(m, 0)?.summands.len() == 1)
}

/// An isomorphism `m -> n`, if one exists.
pub fn find_isomorphism(m: &Module, n: &Module, seed: u64) -> Result<Option<Morphism>> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let basis = hom_basis(m, n)?;
    if basis.is_empty() {
        return Ok(if m.is_zero() {
            Some(Morphism::zero(m, n))
        } else {
            None
        });
    }
    if let Some(f) = basis.iter().find(|f| f.is_iso()) {
        return Ok(Some(f.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| int(rng.gen_range(-5..=5))).collect();
        let f = combine(&basis, &coeffs, m, n);
        if f.is_iso() {
            return Ok(Some(f));
        }
    }
    // A random combination misses the isomorphisms only with small probability;
    // settle the question exactly.
    if is_isomorphic_exact(m, n, seed)? {
        let dm = decompose(m, seed)?;
        let dn = decompose(n, seed)?;
        let mut maps = Vec::new();
        let mut used = vec![false; dn.summands.len()];
        for x in &dm.summands {
            let mut found = None;
            for (j, y) in dn.summands.iter().enumerate() {
                if used[j] || y.dims() != x.dims() {
                    continue;
                }
                if let Some(f) = indecomposable_iso(x, y)? {
                    used[j] = true;
                    found = Some(f.then(&dn.inclusions[j]).expect("composable"));
                    break;
                }
            }
            maps.push(found.ok_or(Error::RetryExhausted)?);
        }
        let inv = dm
            .iso(m)
            .inverse()
            .expect("decomposition is an isomorphism");
        let sum = Module::direct_sum(&dm.summands)?;
        let f = inv
            .then(&from_components_out(&sum, n, &maps))
            .expect("composable");
        return Ok(Some(f));
    }
    Ok(None)
}

/// An isomorphism between indecomposables with split local endomorphism rings.
fn indecomposable_iso(x: &Module, y: &Module) -> Result<Option<Morphism>> {
    let into = hom_basis(x, y)?;
    let out = hom_basis(y, x)?;
    for f in &into {
        for g in &out {
            if !pairing(f, g).is_zero() {
                return Ok(Some(f.clone()));
            }
        }
    }
    Ok(None)
}

fn is_isomorphic_exact(m: &Module, n: &Module, seed: u64) -> Result<bool> {
    let dm = decompose(m, seed)?;
    let mut checked: Vec<&Module> = Vec::new();
    for x in &dm.summands {
        if checked
            .iter()
            .any(|c| c.dims() == x.dims() && multiplicity(c, x).unwrap_or(0) == 1)
        {
            continue;
        }
        checked.push(x);
        if multiplicity(x, m)? != multiplicity(x, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_isomorphic(m: &Module, n: &Module) -> Result<bool> {
    Ok(find_isomorphism(m, n, 0)?.is_some())
}

/// Multiplicities of the given pairwise non-isomorphic indecomposables in `m`;
/// fails if they do not account for all of `m`.
pub fn decompose_against(m: &Module, indecs: &[Module]) -> Result<Vec<usize>> {
    let mut mult = Vec::with_capacity(indecs.len());
    let mut total = 0;
    for x in indecs {
        let k = if x.dim() > m.dim() {
            0
        } else {
            multiplicity(x, m)?
        };
        total += k * x.dim();
        mult.push(k);
    }
    if total != m.dim() {
        return Err(Error::PreconditionFail(
            "module has summands outside the given list".into(),
        ));
    }
    Ok(mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_path_algebra, Algebra, Quiver};
    use std::sync::Arc;

    fn a3() -> Arc<Algebra> {
        Arc::new(build_path_algebra(&Quiver::linear(3)).unwrap())
    }

    #[test]
    fn charpoly_of_companion() {
        let m = Mat::from_i64(&[&[0, 1], &[-6, 5]]);
        assert_eq!(charpoly(&m), vec![int(6), int(-5), int(1)]);
        let mut roots = rational_roots(&charpoly(&m));
        roots.sort();
        assert_eq!(roots, vec![int(2), int(3)]);
    }

    #[test]
    fn decomposes_regular_module() {
        let a = a3();
        let reg = Module::direct_sum(
            &(0..3)
                .map(|v| Module::projective(&a, v))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let d = decompose(&reg, 1).unwrap();
        let mut dims: Vec<Vec<usize>> = d.summands.iter().map(|s| s.dims().to_vec()).collect();
        dims.sort();
        assert_eq!(dims, vec![vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        assert!(d.iso(&reg).is_iso());
    }

    #[test]
    fn multiplicities_of_powers() {
        let a = a3();
        let p = Module::projective(&a, 1);
        let m = Module::direct_sum(&[p.clone(), p.clone(), Module::simple(&a, 0)]).unwrap();
        assert_eq!(multiplicity(&p, &m).unwrap(), 2);
        assert_eq!(multiplicity(&Module::simple(&a, 1), &m).unwrap(), 0);
        let d = decompose(&m, 3).unwrap();
        assert_eq!(d.summands.len(), 3);
    }

    #[test]
    fn isomorphism_after_change_of_basis() {
        let a = a3();
        let p = Module::projective(&a, 0);
        let s = Mat::from_i64(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let sinv = s.inverse().unwrap();
        let mats = (0..a.dim())
            .map(|b| s.mul(&p.full_action(b)).mul(&sinv))
            .collect();
        let q = Module::from_full_action(a.clone(), mats).unwrap();
        assert!(is_isomorphic(&p, &q).unwrap());
        assert!(!is_isomorphic(&p, &Module::injective(&a, 0)).unwrap());
    }
}
