//! Reading and writing the `algebra.v1` and `module.v1` JSON schemas.
//!
//! Vertices are 0-based. Matrices are lists of rows whose entries are integers or
//! `"p/q"` strings.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{
    build_bound_quiver_algebra, build_path_algebra, build_replicated_algebra, Algebra, Arrow,
    BoundQuiverPresentation, Origin, Quiver, Relation,
};
use crate::error::{Error, Result};
use crate::linalg::{format_scalar, mat_from_json, value_to_scalar, Mat, Scalar};
use crate::module::ar::ArQuiver;
use crate::module::Module;
use crate::tilting::{Coresolution, PartialReport, TTiltingReport, TiltingReport};

pub const ALGEBRA_SCHEMA: &str = "algebra.v1";
pub const MODULE_SCHEMA: &str = "module.v1";

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| schema_err(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema_err(format!("{what} must be a non-negative integer")))
}

fn check_schema(v: &Value, expected: &str) -> Result<()> {
    match v.get("schema").and_then(Value::as_str) {
        None => Ok(()),
        Some(s) if s == expected => Ok(()),
        Some(s) => Err(schema_err(format!("expected schema {expected}, got {s}"))),
    }
}

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| Value::String(format_scalar(x)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn quiver_from_json(v: &Value) -> Result<Quiver> {
    let vertex_count = as_usize(field(v, "vertices")?, "vertices")?;
    let arrows = field(v, "arrows")?
        .as_array()
        .ok_or_else(|| schema_err("arrows must be a list"))?
        .iter()
        .map(|a| {
            Ok(Arrow {
                src: as_usize(field(a, "src")?, "src")?,
                tgt: as_usize(field(a, "tgt")?, "tgt")?,
                label: field(a, "label")?
                    .as_str()
                    .ok_or_else(|| schema_err("label must be a string"))?
                    .to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Quiver {
        vertex_count,
        arrows,
    })
}

fn quiver_to_json(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertex_count,
        "arrows": q.arrows.iter().map(|a| json!({"src": a.src, "tgt": a.tgt, "label": a.label})).collect::<Vec<_>>(),
    })
}

fn relation_from_json(v: &Value) -> Result<Relation> {
    let terms = v
        .as_array()
        .ok_or_else(|| schema_err("a relation is a list of terms"))?
        .iter()
        .map(|t| {
            let c = value_to_scalar(field(t, "coeff")?).map_err(Error::Schema)?;
            let path = field(t, "path")?
                .as_array()
                .ok_or_else(|| schema_err("path must be a list of arrow labels"))?
                .iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| schema_err("arrow labels are strings"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((c, path))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Relation { terms })
}

fn relation_to_json(r: &Relation) -> Value {
    Value::Array(
        r.terms
            .iter()
            .map(|(c, p)| json!({"coeff": format_scalar(c), "path": p}))
            .collect(),
    )
}

pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    check_schema(v, ALGEBRA_SCHEMA)?;
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| schema_err("kind must be a string"))?;
    match kind {
        "path" => build_path_algebra(&quiver_from_json(field(v, "quiver")?)?),
        "bound" => {
            let quiver = quiver_from_json(field(v, "quiver")?)?;
            let relations = field(v, "relations")?
                .as_array()
                .ok_or_else(|| schema_err("relations must be a list"))?
                .iter()
                .map(relation_from_json)
                .collect::<Result<Vec<_>>>()?;
            build_bound_quiver_algebra(&BoundQuiverPresentation { quiver, relations })
        }
        "replicated" => {
            let base = algebra_from_json(field(v, "base")?)?;
            build_replicated_algebra(&base, as_usize(field(v, "m")?, "m")?)
        }
        "raw" => raw_from_json(field(v, "structure")?),
        other => Err(schema_err(format!("unknown algebra kind {other:?}"))),
    }
}

fn raw_from_json(s: &Value) -> Result<Algebra> {
    let labels = field(s, "labels")?
        .as_array()
        .ok_or_else(|| schema_err("labels must be a list"))?
        .iter()
        .map(|l| {
            l.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema_err("labels are strings"))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = labels.len();
    let idempotents = field(s, "idempotents")?
        .as_array()
        .ok_or_else(|| schema_err("idempotents must be a list"))?
        .iter()
        .map(|x| as_usize(x, "idempotent"))
        .collect::<Result<Vec<_>>>()?;
    let mut table: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); d * d];
    for p in field(s, "products")?
        .as_array()
        .ok_or_else(|| schema_err("products must be a list"))?
    {
        let p = p
            .as_array()
            .filter(|p| p.len() == 4)
            .ok_or_else(|| schema_err("a product is [i, j, k, coeff]"))?;
        let (i, j, k) = (
            as_usize(&p[0], "i")?,
            as_usize(&p[1], "j")?,
            as_usize(&p[2], "k")?,
        );
        if i >= d || j >= d {
            return Err(schema_err("product index out of range"));
        }
        let c = value_to_scalar(&p[3]).map_err(Error::Schema)?;
        let slot = &mut table[i * d + j];
        match slot.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, x)) => *x += c,
            None => slot.push((k, c)),
        }
    }
    for slot in &mut table {
        slot.retain(|(_, c)| !num_traits::Zero::is_zero(c));
        slot.sort_by_key(|(k, _)| *k);
    }
    Algebra::from_structure(labels, table, idempotents, Origin::Raw)
}

/// Structure constants in `raw` form, valid for any algebra.
pub fn algebra_to_raw_json(a: &Algebra) -> Value {
    let d = a.dim();
    let mut products = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for (k, c) in a.basis_product(i, j) {
                products.push(json!([i, j, k, format_scalar(c)]));
            }
        }
    }
    json!({
        "schema": ALGEBRA_SCHEMA,
        "kind": "raw",
        "structure": {"labels": a.labels(), "idempotents": a.idempotents(), "products": products},
    })
}

/// Quiver form for path and bound quiver algebras, raw form otherwise.
pub fn algebra_to_json(a: &Algebra) -> Value {
    match (a.origin(), a.path_data()) {
        (Origin::Path, Some(pd)) => {
            json!({"schema": ALGEBRA_SCHEMA, "kind": "path", "quiver": quiver_to_json(&pd.quiver)})
        }
        (Origin::Bound, Some(pd)) => json!({
            "schema": ALGEBRA_SCHEMA,
            "kind": "bound",
            "quiver": quiver_to_json(&pd.quiver),
            "relations": pd.relations.iter().map(relation_to_json).collect::<Vec<_>>(),
        }),
        _ => algebra_to_raw_json(a),
    }
}

fn vertex(v: &Value, a: &Algebra) -> Result<usize> {
    let x = as_usize(field(v, "vertex")?, "vertex")?;
    if x >= a.vertex_count() {
        return Err(schema_err(format!("vertex {x} out of range")));
    }
    Ok(x)
}

/// Reads a module. Besides the representation and raw forms, `{"kind":"sum","parts":[...]}`
/// and `{"kind":"projective"|"injective"|"simple","vertex":v}` are accepted.
pub fn module_from_json(a: &Arc<Algebra>, v: &Value) -> Result<Module> {
    check_schema(v, MODULE_SCHEMA)?;
    match v
        .get("kind")
        .and_then(Value::as_str)
        .unwrap_or("representation")
    {
        "representation" => representation_from_json(a, v),
        "raw" => {
            let n = as_usize(field(v, "dim")?, "dim")?;
            let mats = field(v, "action")?
                .as_array()
                .ok_or_else(|| schema_err("action must be a list of matrices"))?
                .iter()
                .map(|m| mat_from_json(m, n, n))
                .collect::<Result<Vec<_>>>()?;
            Module::from_full_action(a.clone(), mats)
        }
        "sum" => {
            let parts = field(v, "parts")?
                .as_array()
                .ok_or_else(|| schema_err("parts must be a list"))?
                .iter()
                .map(|p| module_from_json(a, p))
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Ok(Module::zero(a.clone()));
            }
            Module::direct_sum(&parts)
        }
        "projective" => Ok(Module::projective(a, vertex(v, a)?)),
        "injective" => Ok(Module::injective(a, vertex(v, a)?)),
        "simple" => Ok(Module::simple(a, vertex(v, a)?)),
        "zero" => Ok(Module::zero(a.clone())),
        other => Err(schema_err(format!("unknown module kind {other:?}"))),
    }
}

fn representation_from_json(a: &Arc<Algebra>, v: &Value) -> Result<Module> {
    let pd = a.path_data().ok_or_else(|| {
        schema_err("representation form needs an algebra with a quiver; use the raw form")
    })?;
    let dims = field(v, "dims")?
        .as_array()
        .ok_or_else(|| schema_err("dims must be a list"))?
        .iter()
        .map(|x| as_usize(x, "dimension"))
        .collect::<Result<Vec<_>>>()?;
    if dims.len() != pd.quiver.vertex_count {
        return Err(Error::ShapeMismatch(format!(
            "{} dims for {} vertices",
            dims.len(),
            pd.quiver.vertex_count
        )));
    }
    let empty = Map::new();
    let given = match v.get("arrows") {
        None => &empty,
        Some(x) => x
            .as_object()
            .ok_or_else(|| schema_err("arrows must map labels to matrices"))?,
    };
    if let Some(l) = given.keys().find(|l| pd.quiver.arrow_index(l).is_none()) {
        return Err(schema_err(format!("unknown arrow {l:?}")));
    }
    let arrows = pd
        .quiver
        .arrows
        .iter()
        .map(|ar| match given.get(&ar.label) {
            Some(m) => mat_from_json(m, dims[ar.src], dims[ar.tgt]),
            None => Ok(Mat::zeros(dims[ar.src], dims[ar.tgt])),
        })
        .collect::<Result<Vec<_>>>()?;
    Module::from_representation(a.clone(), dims, arrows)
}

/// Full action matrices of every basis element.
pub fn module_to_raw_json(m: &Module) -> Value {
    json!({
        "schema": MODULE_SCHEMA,
        "kind": "raw",
        "dim": m.dim(),
        "action": (0..m.algebra().dim()).map(|b| mat_to_json(&m.full_action(b))).collect::<Vec<_>>(),
    })
}

/// Representation form when the algebra has a quiver, raw form otherwise.
pub fn module_to_json(m: &Module) -> Value {
    match (m.algebra().path_data(), m.arrow_matrices()) {
        (Some(pd), Some(mats)) => {
            let arrows: Map<String, Value> = pd
                .quiver
                .arrows
                .iter()
                .zip(&mats)
                .map(|(a, x)| (a.label.clone(), mat_to_json(x)))
                .collect();
            json!({"schema": MODULE_SCHEMA, "dims": m.dims(), "arrows": arrows})
        }
        _ => module_to_raw_json(m),
    }
}

fn coresolution_json(c: &Coresolution) -> Value {
    json!({
        "length": c.len(),
        "exponents": c.exponents,
        "terms": c.terms.iter().map(|t| json!({"dims": t.dims()})).collect::<Vec<_>>(),
        "maps": c.maps.iter().map(|f| mat_to_json(&f.matrix())).collect::<Vec<_>>(),
        "exact": c.is_exact(),
    })
}

pub fn tilting_report_json(r: &TiltingReport) -> Value {
    json!({
        "check": "tilting",
        "verdict": r.verdict,
        "reason": r.reason,
        "pd": r.pd,
        "delta": r.delta,
        "rigidity_failures": r.rigidity_failures,
        "coresolution": r.coresolution.as_ref().map(coresolution_json),
        "chain_based": r.chain_based,
    })
}

pub fn partial_report_json(r: &PartialReport) -> Value {
    json!({
        "check": "partial",
        "verdict": r.verdict,
        "reason": r.reason,
        "pd": r.pd,
        "rigidity_failures": r.rigidity_failures,
    })
}

pub fn t_tilting_report_json(r: &TTiltingReport) -> Value {
    json!({
        "check": "t-tilting",
        "verdict": r.verdict,
        "reason": r.reason,
        "t_pd": r.t_pd,
        "rigidity_failures": r.rigidity_failures,
        "coresolution": r.coresolution.as_ref().map(coresolution_json),
        "chain_based": r.chain_based,
    })
}

pub fn ar_quiver_json(q: &ArQuiver) -> Value {
    json!({
        "vertices": q.modules.iter().enumerate().map(|(i, m)| json!({
            "id": i,
            "dims": m.dims(),
            "projective": q.projective[i],
            "injective": q.injective[i],
            "tau": q.tau[i],
        })).collect::<Vec<_>>(),
        "arrows": q.arrows.iter().map(|&(a, b, c)| json!({"from": a, "to": b, "multiplicity": c})).collect::<Vec<_>>(),
    })
}

pub fn parse_str(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| schema_err(format!("malformed JSON: {e}")))
}
