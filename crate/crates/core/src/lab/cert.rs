//! The `cert.v1` certificate format and its replay checker.
//!
//! Replay trusts nothing but the stored structure constants: every module is
//! rechecked against them and every witness map is rechecked by matrix products
//! and ranks.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::json::algebra_from_json;
use crate::linalg::Mat;
use crate::module::{Module, Morphism};

pub const CERT_SCHEMA: &str = "cert.v1";

/// A module as the full action matrix of every basis element of its algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawModule {
    /// `"A"` or `"B"`.
    pub algebra: String,
    pub action: Vec<Mat>,
}

impl RawModule {
    pub fn of(side: &str, m: &Module) -> RawModule {
        RawModule {
            algebra: side.to_string(),
            action: (0..m.algebra().dim()).map(|b| m.full_action(b)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, Mat::rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapWitness {
    pub source: RawModule,
    pub target: RawModule,
    pub matrix: Mat,
}

impl MapWitness {
    pub fn of(side: &str, f: &Morphism) -> MapWitness {
        MapWitness {
            source: RawModule::of(side, f.source()),
            target: RawModule::of(side, f.target()),
            matrix: f.matrix(),
        }
    }
}

/// An indecomposable of `T^perp` and its image over `B`, with the counit
/// `Hom(T, M) (x) T -> M` and the unit `N -> Hom(T, N (x) T)` as isomorphism witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulePair {
    pub a_index: usize,
    pub b_index: usize,
    pub a_module: RawModule,
    pub b_module: RawModule,
    pub counit: MapWitness,
    pub unit: MapWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertEntry {
    /// Indices of indecomposables: summands of a module or members of a subcategory.
    pub ids: Vec<usize>,
    pub verdict: bool,
}

/// An exact sequence `0 -> terms[0] -> terms[1] -> ... -> 0` of `A`-modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceWitness {
    /// Index into the pairing.
    pub pair: usize,
    pub module: usize,
    pub terms: Vec<RawModule>,
    pub maps: Vec<Mat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionalCheck {
    pub name: String,
    pub subcategory: Vec<usize>,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertConfig {
    pub seed: u64,
    pub samples: usize,
    pub pd_bound: usize,
    pub cap: usize,
    pub class: Option<String>,
    /// Injective dimensions of the regular module on both sides, when probed.
    pub gorenstein_probe: Option<(Option<usize>, Option<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub theorem: u8,
    pub config: CertConfig,
    pub algebra: Value,
    pub end_algebra: Value,
    pub tilting: Vec<usize>,
    pub a_ambient: Vec<usize>,
    pub b_ambient: Vec<usize>,
    /// What the entries of each list are, e.g. `"t-tilting modules"`.
    pub left_kind: String,
    pub right_kind: String,
    pub left: Vec<CertEntry>,
    pub right: Vec<CertEntry>,
    pub pairing: Vec<(usize, usize)>,
    pub module_pairs: Vec<ModulePair>,
    pub sequences: Vec<SequenceWitness>,
    pub extensional: Vec<ExtensionalCheck>,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificate serializes")
    }

    pub fn from_json(v: &Value) -> Result<Certificate> {
        serde_json::from_value(v.clone())
            .map_err(|e| Error::Schema(format!("not a {CERT_SCHEMA} certificate: {e}")))
    }

    /// Whether the right list consists of subcategories of `T^perp` on the `A` side.
    pub fn right_is_a_side(&self) -> bool {
        matches!(self.theorem, 5 | 6)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub failures: Vec<String>,
    pub checked_maps: usize,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_module(a: &Algebra, m: &RawModule) -> bool {
    let d = a.dim();
    let n = m.dim();
    if m.action.len() != d || m.action.iter().any(|x| x.rows() != n || x.cols() != n) {
        return false;
    }
    let mut unit = Mat::zeros(n, n);
    for (k, c) in a.unit().iter().enumerate() {
        if !c.is_zero() {
            unit.add_scaled(&m.action[k], c);
        }
    }
    if unit != Mat::identity(n) {
        return false;
    }
    for i in 0..d {
        for j in 0..d {
            let lhs = m.action[i].mul(&m.action[j]);
            let mut rhs = Mat::zeros(n, n);
            for (k, c) in a.basis_product(i, j) {
                rhs.add_scaled(&m.action[*k], c);
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `R_M(b) F = F R_N(b)` for every basis element, by matrix products.
fn intertwines(w: &MapWitness) -> bool {
    let (s, t) = (w.source.dim(), w.target.dim());
    w.matrix.rows() == s
        && w.matrix.cols() == t
        && w.source.action.len() == w.target.action.len()
        && w.source
            .action
            .iter()
            .zip(&w.target.action)
            .all(|(rs, rt)| rs.mul(&w.matrix) == w.matrix.mul(rt))
}

fn is_iso(w: &MapWitness) -> bool {
    w.matrix.rows() == w.matrix.cols() && w.matrix.rank() == w.matrix.rows()
}

fn check_sequence(seq: &SequenceWitness, alg: &Algebra, report: &mut ReplayReport) {
    let tag = format!("sequence for module {} (pair {})", seq.module, seq.pair);
    if seq.maps.len() + 1 != seq.terms.len() {
        report
            .failures
            .push(format!("{tag}: term and map counts disagree"));
        return;
    }
    if let Some(k) = seq.terms.iter().position(|t| !is_module(alg, t)) {
        report
            .failures
            .push(format!("{tag}: term {k} is not a module"));
        return;
    }
    for (k, m) in seq.maps.iter().enumerate() {
        let w = MapWitness {
            source: seq.terms[k].clone(),
            target: seq.terms[k + 1].clone(),
            matrix: m.clone(),
        };
        report.checked_maps += 1;
        if !intertwines(&w) {
            report
                .failures
                .push(format!("{tag}: map {k} is not a homomorphism"));
            return;
        }
    }
    // Exactness by ranks: injective first map, rank additivity at every inner term,
    // surjective last map, consecutive composites zero.
    let ranks: Vec<usize> = seq.maps.iter().map(Mat::rank).collect();
    let mut exact = ranks.first().is_some_and(|&r| r == seq.terms[0].dim())
        && ranks
            .last()
            .is_some_and(|&r| r == seq.terms.last().expect("nonempty").dim());
    for k in 1..seq.maps.len() {
        exact &= seq.maps[k - 1].mul(&seq.maps[k]).is_zero()
            && ranks[k - 1] + ranks[k] == seq.terms[k].dim();
    }
    if !exact {
        report.failures.push(format!("{tag}: not exact"));
    }
}

/// Re-validates a certificate from its own data.
pub fn replay(cert: &Certificate) -> ReplayReport {
    let mut report = ReplayReport::default();
    let fail = |r: &mut ReplayReport, s: String| r.failures.push(s);
    if cert.schema != CERT_SCHEMA {
        fail(
            &mut report,
            format!("schema {:?} is not {CERT_SCHEMA}", cert.schema),
        );
        return report;
    }
    if !cert.passed || !cert.failures.is_empty() {
        fail(
            &mut report,
            "certificate records a failed verification".into(),
        );
    }
    let (a, b) = match (
        algebra_from_json(&cert.algebra),
        algebra_from_json(&cert.end_algebra),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            fail(&mut report, "stored algebras do not load".into());
            return report;
        }
    };
    let side = |m: &RawModule| -> Option<&Algebra> {
        match m.algebra.as_str() {
            "A" => Some(&a),
            "B" => Some(&b),
            _ => None,
        }
    };

    let mut forward: HashMap<usize, usize> = HashMap::new();
    let mut a_modules: HashMap<usize, &RawModule> = HashMap::new();
    for p in &cert.module_pairs {
        let tag = format!("pair ({}, {})", p.a_index, p.b_index);
        let mods = [
            &p.a_module,
            &p.b_module,
            &p.counit.source,
            &p.counit.target,
            &p.unit.source,
            &p.unit.target,
        ];
        if mods
            .iter()
            .any(|m| !side(m).is_some_and(|alg| is_module(alg, m)))
        {
            fail(
                &mut report,
                format!("{tag}: stored module fails the module axioms"),
            );
            continue;
        }
        if p.a_module.algebra != "A"
            || p.b_module.algebra != "B"
            || p.counit.source.algebra != "A"
            || p.unit.source.algebra != "B"
        {
            fail(&mut report, format!("{tag}: modules on the wrong side"));
            continue;
        }
        if p.counit.target != p.a_module || p.unit.source != p.b_module {
            fail(
                &mut report,
                format!("{tag}: witness does not end at the paired module"),
            );
        }
        for (name, w) in [("counit", &p.counit), ("unit", &p.unit)] {
            report.checked_maps += 1;
            if !intertwines(w) {
                fail(&mut report, format!("{tag}: {name} is not a homomorphism"));
            } else if !is_iso(w) {
                fail(&mut report, format!("{tag}: {name} is not invertible"));
            }
        }
        if forward.insert(p.a_index, p.b_index).is_some() {
            fail(&mut report, format!("{tag}: index paired twice"));
        }
        a_modules.insert(p.a_index, &p.a_module);
    }
    let images: BTreeSet<usize> = forward.values().copied().collect();
    if images.len() != forward.len() {
        fail(&mut report, "module pairing is not injective".into());
    }

    // The pairing of list entries is a bijection.
    let lefts: BTreeSet<usize> = cert.pairing.iter().map(|p| p.0).collect();
    let rights: BTreeSet<usize> = cert.pairing.iter().map(|p| p.1).collect();
    if cert.left.len() != cert.right.len()
        || lefts.len() != cert.pairing.len()
        || rights.len() != cert.pairing.len()
        || lefts.len() != cert.left.len()
        || lefts.iter().any(|&i| i >= cert.left.len())
        || rights.iter().any(|&j| j >= cert.right.len())
    {
        fail(
            &mut report,
            "pairing is not a bijection between the lists".into(),
        );
        return report;
    }
    for e in cert.left.iter().chain(&cert.right) {
        if !e.verdict {
            fail(
                &mut report,
                format!("entry {:?} has a negative verdict", e.ids),
            );
        }
    }
    if !cert.right_is_a_side() {
        for &(i, j) in &cert.pairing {
            let mapped: Option<BTreeSet<usize>> = cert.left[i]
                .ids
                .iter()
                .map(|x| forward.get(x).copied())
                .collect();
            let right: BTreeSet<usize> = cert.right[j].ids.iter().copied().collect();
            if mapped.as_ref() != Some(&right) {
                fail(
                    &mut report,
                    format!("left entry {i} does not map onto right entry {j}"),
                );
            }
        }
    } else {
        for &(i, j) in &cert.pairing {
            if !cert.left[i]
                .ids
                .iter()
                .all(|x| cert.right[j].ids.contains(x))
            {
                fail(
                    &mut report,
                    format!("left entry {i} is not contained in right entry {j}"),
                );
            }
        }
        for seq in &cert.sequences {
            check_sequence(seq, &a, &mut report);
            let start = a_modules.get(&seq.module).copied();
            if seq.terms.first() != start {
                fail(
                    &mut report,
                    format!("sequence for module {} does not start at it", seq.module),
                );
            }
        }
    }
    for x in &cert.extensional {
        if x.lhs != x.rhs {
            fail(
                &mut report,
                format!("{} differs on {:?}", x.name, x.subcategory),
            );
        }
    }
    report
}

/// Convenience for callers holding JSON.
pub fn replay_json(v: &Value) -> Result<ReplayReport> {
    Ok(replay(&Certificate::from_json(v)?))
}
