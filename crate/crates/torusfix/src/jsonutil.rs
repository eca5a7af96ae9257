//! Shared serde helpers for the JSON input and report formats.
//!
//! Conventions used by every format:
//! - rationals travel as strings `"p"` or `"p/q"` (arbitrary precision);
//!   plain JSON integers are also accepted on input;
//! - integers that may exceed machine range travel as JSON integers or
//!   digit strings;
//! - sparse polynomials are objects mapping comma-separated exponent lists
//!   to rational strings, e.g. `{"2,0,1": "3/2"}`;
//! - subgroups are `"T"`, `"trivial"`, or `{"ann": [[...], ...]}` with the
//!   ambient rank supplied by the surrounding document.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{invalid, TfResult};
use crate::lattice::{Subgroup, ZVec};
use crate::scalar::{format_q, parse_q, parse_z, Q};

/// Parse a JSON value holding a rational: string `"p/q"` or integer.
pub fn value_to_q(v: &Value) -> TfResult<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Q::from_integer(BigInt::from(i)))
            } else {
                Err(invalid(format!(
                    "number {n} is not an exact integer; write it as a string"
                )))
            }
        }
        other => Err(invalid(format!("expected a rational, found {other}"))),
    }
}

/// Parse a JSON value holding an integer: JSON integer or digit string.
pub fn value_to_z(v: &Value) -> TfResult<BigInt> {
    match v {
        Value::String(s) => parse_z(s),
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| invalid(format!("number {n} is not an integer"))),
        other => Err(invalid(format!("expected an integer, found {other}"))),
    }
}

/// Integer vector from a JSON array.
pub fn value_to_zvec(v: &Value) -> TfResult<ZVec> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(format!("expected an integer vector, found {v}")))?;
    arr.iter().map(value_to_z).collect()
}

/// Rational vector from a JSON array.
pub fn value_to_qvec(v: &Value) -> TfResult<Vec<Q>> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(format!("expected a rational vector, found {v}")))?;
    arr.iter().map(value_to_q).collect()
}

/// Render an integer vector as JSON.
pub fn zvec_to_value(v: &[BigInt]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| match i64::try_from(x) {
                Ok(i) => Value::from(i),
                Err(_) => Value::String(x.to_string()),
            })
            .collect(),
    )
}

/// Render a rational vector as JSON strings.
pub fn qvec_to_value(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_q(x))).collect())
}

/// Parse a sparse polynomial object `{"e1,e2,...": "p/q"}` into exponent /
/// coefficient pairs with `nvars` entries per exponent list.
pub fn value_to_poly_terms(v: &Value, nvars: usize) -> TfResult<Vec<(Vec<u32>, Q)>> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid(format!("expected a polynomial object, found {v}")))?;
    let mut out = Vec::new();
    for (key, coeff) in obj {
        let expo = parse_expo(key, nvars)?;
        out.push((expo, value_to_q(coeff)?));
    }
    Ok(out)
}

/// Parse a comma-separated exponent list.
pub fn parse_expo(key: &str, nvars: usize) -> TfResult<Vec<u32>> {
    let parts: Vec<&str> = if key.trim().is_empty() {
        Vec::new()
    } else {
        key.split(',').collect()
    };
    if parts.len() != nvars {
        return Err(invalid(format!(
            "exponent key '{key}' has {} entries, expected {nvars}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| invalid(format!("malformed exponent '{p}' in key '{key}'")))
        })
        .collect()
}

/// Render a sparse polynomial as the `{"e1,e2,...": "p/q"}` object, with
/// keys in the map's deterministic order.
pub fn poly_terms_to_value<'a>(
    terms: impl IntoIterator<Item = (&'a Vec<u32>, &'a Q)>,
) -> Value {
    let mut obj = serde_json::Map::new();
    for (e, c) in terms {
        let key: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        obj.insert(key.join(","), Value::String(format_q(c)));
    }
    Value::Object(obj)
}

/// Parse a subgroup literal: `"T"`, `"trivial"`, or `{"ann": rows}`.
pub fn value_to_subgroup(v: &Value, n: usize) -> TfResult<Subgroup> {
    match v {
        Value::String(s) if s == "T" => Ok(Subgroup::full(n)),
        Value::String(s) if s == "trivial" => Ok(Subgroup::trivial(n)),
        Value::String(s) => Err(invalid(format!(
            "unknown subgroup shorthand '{s}' (use \"T\", \"trivial\", or an annihilator object)"
        ))),
        Value::Object(obj) => {
            let ann = obj
                .get("ann")
                .ok_or_else(|| invalid("subgroup object lacks an \"ann\" field".to_string()))?;
            let rows_v = ann
                .as_array()
                .ok_or_else(|| invalid("subgroup \"ann\" must be an array of rows".to_string()))?;
            let rows: TfResult<Vec<ZVec>> = rows_v.iter().map(value_to_zvec).collect();
            if let Some(nn) = obj.get("n") {
                let nn = nn
                    .as_u64()
                    .ok_or_else(|| invalid("subgroup \"n\" must be a nonnegative integer".to_string()))?;
                if nn as usize != n {
                    return Err(invalid(format!(
                        "subgroup rank {nn} disagrees with the document rank {n}"
                    )));
                }
            }
            Subgroup::canonicalize(&rows?, n)
        }
        other => Err(invalid(format!("expected a subgroup literal, found {other}"))),
    }
}

/// Render a subgroup as its shorthand string or annihilator object.
pub fn subgroup_to_value(s: &Subgroup) -> Value {
    if s.is_full() {
        return Value::String("T".to_string());
    }
    if s.is_trivial() {
        return Value::String("trivial".to_string());
    }
    let rows: Vec<Value> = s.ann_rows().iter().map(|r| zvec_to_value(r)).collect();
    let mut obj = serde_json::Map::new();
    obj.insert("ann".to_string(), Value::Array(rows));
    Value::Object(obj)
}

/// Fetch a required field from a JSON object.
pub fn require<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> TfResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| invalid(format!("missing required field \"{key}\"")))
}

/// Interpret a JSON document as an object.
pub fn as_object(v: &Value) -> TfResult<&serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| invalid("top-level JSON value must be an object".to_string()))
}

/// Sorted map to JSON object (keys already strings).
pub fn btree_to_object(map: &BTreeMap<String, Value>) -> Value {
    let mut obj = serde_json::Map::new();
    for (k, v) in map {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}
