//! JSON formats and the canonical writer.
//!
//! Output is canonical: object keys sorted, two-space indentation, floats
//! with 17 significant digits, rationals as `"p/q"` strings. Non-finite
//! floats become the strings `"nan"`, `"inf"`, `"-inf"`.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use vlat_core::inner::{BlaschkeZero, InnerSpec, SingularAtom};
use vlat_core::lattice::{suggested_trunc_degree, IdealSpec, SubspaceBasis, ZeroChain, DEFAULT_TOL};
use vlat_core::operators::BandMatrix;
use vlat_core::scalar::{format_rational, parse_rational, rational_from_f64};
use vlat_core::series::{DynPoly, TaylorPoly};
use vlat_core::{Mode, QComplex, Scalar, C64};

use crate::CliError;

/// A float in canonical form. `serde_json` keeps integers and floats apart,
/// so every float field goes through here.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Short scalar arrays (coefficient pairs, entries) stay on one line.
            if items.len() <= 3 && items.iter().all(|x| !x.is_object() && !x.is_array() || is_flat_pair(x)) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], indent + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn is_flat_pair(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() <= 2 && a.iter().all(|x| !x.is_array() && !x.is_object()))
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// First 16 hex digits of the SHA-256 of the canonical form.
pub fn digest(v: &Value) -> String {
    let hash = Sha256::digest(to_canonical_string(v).as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Scalars with a JSON encoding: `[re, im]` numbers for floats,
/// `["p/q", "p/q"]` strings for rationals.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, CliError>;
}

fn float_field(v: &Value) -> Result<f64, CliError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad("number out of range")),
        Value::String(s) => match s.as_str() {
            "nan" => Ok(f64::NAN),
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => other.parse().map_err(|_| bad(format!("expected a number, got {other:?}"))),
        },
        other => Err(bad(format!("expected a number, got {other}"))),
    }
}

fn pair(v: &Value) -> Result<(&Value, &Value), CliError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok((re, im)),
        _ => Err(bad(format!("expected a [re, im] pair, got {v}"))),
    }
}

impl JsonScalar for C64 {
    fn to_json(&self) -> Value {
        json!([num(self.re), num(self.im)])
    }

    fn from_json(v: &Value) -> Result<Self, CliError> {
        let (re, im) = pair(v)?;
        Ok(C64::new(float_field(re)?, float_field(im)?))
    }
}

fn rational_field(v: &Value) -> Result<vlat_core::Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(CliError::from),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()).map_err(CliError::from),
        Value::Number(n) => Ok(rational_from_f64(n.as_f64().unwrap_or(f64::NAN))),
        other => Err(bad(format!("expected a rational, got {other}"))),
    }
}

impl JsonScalar for QComplex {
    fn to_json(&self) -> Value {
        json!([format_rational(&self.re), format_rational(&self.im)])
    }

    fn from_json(v: &Value) -> Result<Self, CliError> {
        let (re, im) = pair(v)?;
        Ok(QComplex::new(rational_field(re)?, rational_field(im)?))
    }
}

pub fn series_to_json<S: JsonScalar>(p: &TaylorPoly<S>) -> Value {
    json!({
        "mode": S::MODE.as_str(),
        "coeffs": p.coeffs().iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
    })
}

fn coeffs_from_json<S: JsonScalar>(v: &Value) -> Result<TaylorPoly<S>, CliError> {
    let arr = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("series needs a \"coeffs\" array"))?;
    Ok(TaylorPoly::new(arr.iter().map(S::from_json).collect::<Result<_, _>>()?))
}

/// Reads a series in the mode it declares (float when absent).
pub fn series_from_json(v: &Value) -> Result<DynPoly, CliError> {
    let mode = match v.get("mode") {
        None => Mode::Float,
        Some(m) => m.as_str().ok_or_else(|| bad("\"mode\" must be a string"))?.parse()?,
    };
    Ok(match mode {
        Mode::Float => DynPoly::Float(coeffs_from_json::<C64>(v)?),
        Mode::Rational => DynPoly::Rational(coeffs_from_json::<QComplex>(v)?),
    })
}

/// Reads a series and converts it to `S` (exactly, when lifting floats).
pub fn series_as<S: JsonScalar>(v: &Value) -> Result<TaylorPoly<S>, CliError> {
    Ok(match series_from_json(v)? {
        DynPoly::Float(p) => p.lift(),
        DynPoly::Rational(p) => p.lift(),
    })
}

/// A list of series: a bare array or `{"cofactors": [...]}`.
pub fn series_list_as<S: JsonScalar>(v: &Value) -> Result<Vec<TaylorPoly<S>>, CliError> {
    let arr = v
        .as_array()
        .or_else(|| v.get("cofactors").and_then(Value::as_array))
        .ok_or_else(|| bad("expected an array of series or {\"cofactors\": [...]}"))?;
    arr.iter().map(series_as::<S>).collect()
}

pub fn inner_to_json(g: &InnerSpec) -> Value {
    json!({
        "blaschke": g.blaschke().iter().map(|z| json!({"re": num(z.a.re), "im": num(z.a.im), "mult": z.multiplicity})).collect::<Vec<_>>(),
        "atoms": g.atoms().iter().map(|a| json!({"theta": num(a.theta), "mass": num(a.mass)})).collect::<Vec<_>>(),
    })
}

fn list<'a>(v: &'a Value, key: &str) -> Result<&'a [Value], CliError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(other) => Err(bad(format!("\"{key}\" must be an array, got {other}"))),
    }
}

fn field_f64(v: &Value, key: &str) -> Result<f64, CliError> {
    float_field(v.get(key).ok_or_else(|| bad(format!("missing \"{key}\"")))?)
}

pub fn inner_from_json(v: &Value) -> Result<InnerSpec, CliError> {
    let zeros = list(v, "blaschke")?
        .iter()
        .map(|z| {
            let mult = match z.get("mult") {
                None => 1,
                Some(m) => m.as_u64().and_then(|m| u32::try_from(m).ok()).ok_or_else(|| bad("\"mult\" must be a non-negative integer"))?,
            };
            Ok(BlaschkeZero::new(C64::new(field_f64(z, "re")?, field_f64(z, "im")?), mult))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let atoms = list(v, "atoms")?
        .iter()
        .map(|a| Ok(SingularAtom::new(field_f64(a, "theta")?, field_f64(a, "mass")?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(InnerSpec::new(zeros, atoms)?)
}

pub fn ideal_to_json(spec: &IdealSpec) -> Value {
    json!({
        "n": spec.n(),
        "inner": inner_to_json(spec.inner()),
        "chain": spec.chain().sets().iter().map(|s| s.iter().map(|&t| num(t)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "trunc_degree": spec.trunc_degree(),
        "tol": num(spec.tol()),
        "atom_order": spec.atom_order(),
    })
}

/// `trunc_degree` defaults to the suggested degree, `tol` to `1e-9`.
pub fn ideal_from_json(v: &Value) -> Result<IdealSpec, CliError> {
    if !v.is_object() {
        return Err(bad("ideal spec must be a JSON object"));
    }
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("\"n\" must be a positive integer"))? as usize;
    let inner = match v.get("inner") {
        None | Some(Value::Null) => InnerSpec::trivial(),
        Some(g) => inner_from_json(g)?,
    };
    let sets = list(v, "chain")?
        .iter()
        .map(|s| {
            s.as_array()
                .ok_or_else(|| bad("\"chain\" must be an array of arrays of angles"))?
                .iter()
                .map(float_field)
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let tol = match v.get("tol") {
        None | Some(Value::Null) => DEFAULT_TOL,
        Some(t) => float_field(t)?,
    };
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(bad("\"tol\" must be a non-negative number"));
    }
    let trunc = match v.get("trunc_degree") {
        None | Some(Value::Null) => suggested_trunc_degree(&inner, n.max(1), tol.max(f64::MIN_POSITIVE)),
        Some(t) => t.as_u64().ok_or_else(|| bad("\"trunc_degree\" must be a non-negative integer"))? as usize,
    };
    let mut spec = IdealSpec::new(n, inner, ZeroChain::new(sets)?, trunc, tol)?;
    if let Some(d) = v.get("atom_order") {
        spec = spec.with_atom_order(d.as_u64().ok_or_else(|| bad("\"atom_order\" must be an integer"))? as usize);
    }
    Ok(spec)
}

pub fn band_matrix_to_json<S: JsonScalar>(m: &BandMatrix<S>, op: &str) -> Value {
    json!({
        "op": op,
        "mode": S::MODE.as_str(),
        "dim": m.dim,
        "entries": m.entries().map(|(r, c, v)| json!([r, c, v.to_json()])).collect::<Vec<_>>(),
    })
}

pub fn basis_to_json<S: JsonScalar>(b: &SubspaceBasis<S>) -> Value {
    json!({
        "spec": ideal_to_json(&b.spec),
        "mode": S::MODE.as_str(),
        "pre_images": b.pre_images.iter().map(series_to_json).collect::<Vec<_>>(),
        "elements": b.elements.iter().map(series_to_json).collect::<Vec<_>>(),
    })
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
