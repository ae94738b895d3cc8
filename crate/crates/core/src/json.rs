//! JSON interchange.
//!
//! * context: `{"kind":"prime","p":7,"l":3,"gamma":2}` or `{"kind":"cyclotomic","l":3}`
//! * element: an integer (prime) or an array of `"num/den"` strings of length `φ(l)`
//! * matrix: `{"rows":n,"cols":n,"entries":[...]}`, row-major
//! * solution: `{"ctx":…,"x":…,"y":…}`
//!
//! Emitted objects keep a fixed key order and elements use one canonical
//! encoding, so equal values always serialize to identical bytes.

use serde_json::{json, Map, Value};

use crate::burnside::ElementaryCombination;
use crate::families::{RelationReport, Solution, SpectrumCheck, StructuralReport};
use crate::field::{parse_rational, FieldCtx, FieldElem, FieldKind};
use crate::matrix::Mat;
use crate::reduce::{CanonicalForm, Reduction, ReductionTrace};

/// A decoding failure, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("field `{field}`: {message}")]
pub struct JsonError {
    pub field: String,
    pub message: String,
}

fn err(field: &str, message: impl Into<String>) -> JsonError {
    JsonError {
        field: field.to_string(),
        message: message.into(),
    }
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| err(&join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_u64(v: &Value, path: &str) -> Result<u64, JsonError> {
    v.as_u64().ok_or_else(|| err(path, "expected a nonnegative integer"))
}

pub fn ctx_to_json(ctx: &FieldCtx) -> Value {
    match ctx.kind() {
        FieldKind::Prime => json!({
            "kind": "prime",
            "p": ctx.characteristic(),
            "l": ctx.order(),
            "gamma": ctx.gamma().residue(),
        }),
        FieldKind::Cyclotomic => json!({"kind": "cyclotomic", "l": ctx.order()}),
    }
}

pub fn ctx_from_json(v: &Value, path: &str) -> Result<FieldCtx, JsonError> {
    let kind = get(v, "kind", path)?
        .as_str()
        .ok_or_else(|| err(&join(path, "kind"), "expected a string"))?;
    let l = as_u64(get(v, "l", path)?, &join(path, "l"))? as usize;
    let ctx = match kind {
        "prime" => {
            let p = as_u64(get(v, "p", path)?, &join(path, "p"))?;
            let hint = match v.get("gamma") {
                None | Some(Value::Null) => None,
                Some(g) => Some(as_u64(g, &join(path, "gamma"))?),
            };
            FieldCtx::prime(p, l, hint)
        }
        "cyclotomic" => FieldCtx::cyclotomic(l),
        other => return Err(err(&join(path, "kind"), format!("unknown kind {other:?}"))),
    };
    ctx.map_err(|e| err(path, e.to_string()))
}

pub fn elem_to_json(e: &FieldElem) -> Value {
    match e.residue() {
        Some(r) => json!(r),
        None => Value::Array(
            e.coeffs()
                .expect("cyclotomic")
                .iter()
                .map(|q| Value::String(format!("{}/{}", q.numer(), q.denom())))
                .collect(),
        ),
    }
}

pub fn elem_from_json(ctx: &FieldCtx, v: &Value, path: &str) -> Result<FieldElem, JsonError> {
    match ctx.kind() {
        FieldKind::Prime => {
            let n = v.as_i64().ok_or_else(|| err(path, "expected an integer"))?;
            Ok(ctx.from_int(n))
        }
        FieldKind::Cyclotomic => {
            let arr = v
                .as_array()
                .ok_or_else(|| err(path, "expected an array of \"num/den\" strings"))?;
            if arr.len() != ctx.degree() {
                return Err(err(path, format!("expected {} coefficients, got {}", ctx.degree(), arr.len())));
            }
            let coeffs = arr
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    c.as_str()
                        .and_then(parse_rational)
                        .ok_or_else(|| err(&format!("{path}[{i}]"), "expected a \"num/den\" string"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ctx.from_coeffs(coeffs))
        }
    }
}

pub fn elems_to_json(es: &[FieldElem]) -> Value {
    Value::Array(es.iter().map(elem_to_json).collect())
}

pub fn elems_from_json(ctx: &FieldCtx, v: &Value, path: &str) -> Result<Vec<FieldElem>, JsonError> {
    v.as_array()
        .ok_or_else(|| err(path, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, e)| elem_from_json(ctx, e, &format!("{path}[{i}]")))
        .collect()
}

pub fn mat_to_json(m: &Mat) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": elems_to_json(m.entries()),
    })
}

pub fn mat_from_json(ctx: &FieldCtx, v: &Value, path: &str) -> Result<Mat, JsonError> {
    let rows = as_u64(get(v, "rows", path)?, &join(path, "rows"))? as usize;
    let cols = as_u64(get(v, "cols", path)?, &join(path, "cols"))? as usize;
    let entries = elems_from_json(ctx, get(v, "entries", path)?, &join(path, "entries"))?;
    if entries.len() != rows * cols {
        return Err(err(
            &join(path, "entries"),
            format!("expected {} entries, got {}", rows * cols, entries.len()),
        ));
    }
    Ok(Mat::from_vector(ctx, rows, cols, entries))
}

pub fn solution_to_json(s: &Solution) -> Value {
    json!({
        "ctx": ctx_to_json(s.ctx()),
        "x": mat_to_json(s.x()),
        "y": mat_to_json(s.y()),
    })
}

pub fn solution_from_json(v: &Value) -> Result<Solution, JsonError> {
    let ctx = ctx_from_json(get(v, "ctx", "")?, "ctx")?;
    let x = mat_from_json(&ctx, get(v, "x", "")?, "x")?;
    let y = mat_from_json(&ctx, get(v, "y", "")?, "y")?;
    Solution::new(x, y).map_err(|e| err("y", e.to_string()))
}

pub fn canonical_to_json(c: &CanonicalForm) -> Value {
    match c {
        CanonicalForm::SingularBeta { beta } => json!({
            "tag": "SingularBeta",
            "beta": elem_to_json(beta),
        }),
        CanonicalForm::NonsingularLambdaEta { lambda_rep, eta } => json!({
            "tag": "NonsingularLambdaEta",
            "lambda_rep": elem_to_json(lambda_rep),
            "eta": elem_to_json(eta),
        }),
    }
}

pub fn canonical_from_json(ctx: &FieldCtx, v: &Value, path: &str) -> Result<CanonicalForm, JsonError> {
    let tag = get(v, "tag", path)?
        .as_str()
        .ok_or_else(|| err(&join(path, "tag"), "expected a string"))?;
    match tag {
        "SingularBeta" => Ok(CanonicalForm::SingularBeta {
            beta: elem_from_json(ctx, get(v, "beta", path)?, &join(path, "beta"))?,
        }),
        "NonsingularLambdaEta" => Ok(CanonicalForm::NonsingularLambdaEta {
            lambda_rep: elem_from_json(ctx, get(v, "lambda_rep", path)?, &join(path, "lambda_rep"))?,
            eta: elem_from_json(ctx, get(v, "eta", path)?, &join(path, "eta"))?,
        }),
        other => Err(err(&join(path, "tag"), format!("unknown tag {other:?}"))),
    }
}

pub fn relation_to_json(r: &RelationReport) -> Value {
    json!({
        "holds": r.holds,
        "commutative": r.commutative,
        "residual": mat_to_json(&r.residual),
    })
}

pub fn structural_to_json(r: &StructuralReport) -> Value {
    let spectrum = match &r.spectrum {
        SpectrumCheck::NotApplicable => json!({"status": "not_applicable"}),
        SpectrumCheck::Unsupported => json!({"status": "unsupported"}),
        SpectrumCheck::Orbit { eigenvalue, holds } => json!({
            "status": "orbit",
            "eigenvalue": elem_to_json(eigenvalue),
            "holds": holds,
        }),
    };
    json!({
        "all_pass": r.all_pass(),
        "x_power_scalar": r.x_power_scalar.as_ref().map(elem_to_json),
        "y_power_scalar": r.y_power_scalar.as_ref().map(elem_to_json),
        "u": mat_to_json(&r.u),
        "u_skew_x": r.u_skew_x,
        "u_skew_y": r.u_skew_y,
        "u_nonsingular": r.u_nonsingular,
        "spectrum": spectrum,
    })
}

pub fn elementary_to_json(c: &ElementaryCombination) -> Value {
    json!({
        "m": c.m,
        "n": c.n,
        "leading": elem_to_json(&c.leading),
        "terms": c.terms.iter().map(|t| json!({
            "i": t.i,
            "j": t.j,
            "coefficient": elem_to_json(&t.coeff),
        })).collect::<Vec<_>>(),
    })
}

pub fn trace_to_json(t: &ReductionTrace) -> Value {
    match t {
        ReductionTrace::Singular(t) => json!({
            "kind": "singular",
            "block_sizes": t.block_sizes,
            "jordan_q": mat_to_json(&t.jordan_q),
            "d": mat_to_json(&t.d),
            "alphas": elems_to_json(&t.alphas),
            "p": elems_to_json(&t.p),
            "p_matrix": mat_to_json(&t.p_matrix),
            "beta": elem_to_json(&t.beta),
        }),
        ReductionTrace::Nonsingular(t) => json!({
            "kind": "nonsingular",
            "eigenvalue": elem_to_json(&t.eigenvalue),
            "lambda0": elem_to_json(&t.lambda0),
            "eigenbasis_inv": mat_to_json(&t.eigenbasis_inv),
            "bs_found": elems_to_json(&t.bs_found),
            "rotation": t.rotation,
            "permutation": mat_to_json(&t.permutation),
            "lambda_rep": elem_to_json(&t.lambda_rep),
            "bs": elems_to_json(&t.bs),
            "diagonal": mat_to_json(&t.diagonal),
            "eta": elem_to_json(&t.eta),
        }),
    }
}

pub fn reduction_to_json(r: &Reduction) -> Value {
    json!({
        "canonical": canonical_to_json(&r.canonical),
        "witness": mat_to_json(&r.witness.q),
        "trace": trace_to_json(&r.trace),
    })
}

/// Builds an object from key/value pairs in the given order.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
