//! Report envelope and value rendering shared by all verbs.

use mvf_core::interval::format_significant;
use mvf_core::value::fmt_q;
use mvf_core::{AbsValue, MvfError, Real};
use serde::Serialize;
use serde_json::{json, Value};

/// Top-level JSON object. Field order is part of the output contract.
#[derive(Serialize)]
pub struct Envelope<'a> {
    pub command: &'a str,
    pub field: Option<String>,
    pub seed: u64,
    pub result: Value,
    pub violations: Vec<Value>,
    /// Only filled with `--timing`, so repeated runs stay byte-identical.
    pub timing_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

/// What a verb hands back: machine result, violations and a table rendering.
pub struct Outcome {
    pub result: Value,
    pub violations: Vec<Value>,
    pub table: String,
}

impl Outcome {
    pub fn new(result: Value, table: String) -> Outcome {
        Outcome { result, violations: Vec::new(), table }
    }
}

/// Symbolic `c^q` form plus a decimal, `~` marking a rounded one.
pub fn value_json(v: &AbsValue) -> Value {
    json!({
        "symbolic": v.symbolic(),
        "decimal": decimal(v),
        "exponent": v.exponent().map(fmt_q),
    })
}

/// Exact rational when there is one, else `~` and six significant digits.
pub fn decimal(v: &AbsValue) -> String {
    match v.to_rational() {
        Some(r) => fmt_q(&r),
        None => format!("~{}", format_significant(&v.enclose(96).midpoint(), 6)),
    }
}

pub fn real_json(r: &Real) -> Value {
    json!({ "decimal": r.render(), "exact": r.exact().is_some() })
}

pub fn error_json(e: &MvfError) -> Value {
    let kind = format!("{e:?}");
    let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    match e {
        MvfError::Parse { position, expected, found } => json!({
            "kind": kind,
            "message": e.to_string(),
            "position": position,
            "expected": expected,
            "found": found,
        }),
        _ => json!({ "kind": kind, "message": e.to_string() }),
    }
}

/// Left-aligned two-column table.
pub fn table(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}
