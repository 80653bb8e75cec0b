//! Canonical text and JSON forms of kernel values, and their inverses.

use std::sync::Arc;

use integrabilis_core::exceptional::VerificationReport;
use integrabilis_core::{
    CycloField, ExtDescriptor, KOneForm, LOneForm, LogSum, OneForm, PSeries, Rat, RatFn,
};
use serde_json::{json, Value as Json};

use crate::error::CliError;
use crate::parse::parse_k;

pub fn desc_json(d: &ExtDescriptor) -> Json {
    json!({ "n": d.n(), "k": d.k().to_string(), "N": d.field().order() })
}

pub fn kform_json(w: &KOneForm) -> Json {
    json!({ "A": w.a.to_string(), "B": w.b.to_string() })
}

pub fn lform_json(w: &LOneForm) -> Json {
    json!({ "desc": desc_json(w.desc()), "A": w.a.to_string(), "B": w.b.to_string() })
}

pub fn logsum_json(psi: &LogSum) -> Json {
    let terms: Vec<Json> = psi
        .terms()
        .iter()
        .map(|(c, u)| json!({ "c": c.to_string(), "u": u.to_string() }))
        .collect();
    json!({ "desc": desc_json(psi.desc()), "v": psi.v().to_string(), "terms": terms })
}

pub fn report_json(r: &VerificationReport) -> Json {
    json!({
        "gamma_nonzero": r.gamma_nonzero,
        "wedge_zero": r.wedge_zero,
        "trace_zero": r.trace_zero,
        "norm_one": r.norm_one,
        "integrating_factor_ok": r.integrating_factor_ok,
        "constants_independent": r.constants_independent,
        "all_ok": r.all_ok(),
    })
}

pub fn series_json(s: &PSeries) -> Json {
    let terms: Vec<Json> = s
        .terms()
        .map(|(e, c)| json!({ "exp": e.to_string(), "coeff": c.to_string() }))
        .collect();
    json!({ "ram": s.ram(), "terms": terms, "bound": s.bound().to_string() })
}

fn parse_rat(s: &str, what: &str) -> Result<Rat, CliError> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| CliError::usage(format!("{what}: expected a rational \"p/q\", got {s:?}")))
}

/// Reads a series from its JSON form; a missing `bound` falls back to
/// `default_bound`.
pub fn parse_series(src: &str, field: &Arc<CycloField>, default_bound: &Rat) -> Result<PSeries, CliError> {
    let v: Json = serde_json::from_str(src).map_err(|e| CliError::usage(format!("series JSON: {e}")))?;
    series_from_json(&v, field, default_bound)
}

pub fn series_from_json(v: &Json, field: &Arc<CycloField>, default_bound: &Rat) -> Result<PSeries, CliError> {
    let bad = |m: &str| CliError::usage(format!("series: {m}"));
    let ram = v
        .get("ram")
        .and_then(Json::as_u64)
        .and_then(|r| u32::try_from(r).ok())
        .ok_or_else(|| bad("\"ram\" must be a positive integer"))?;
    let bound = match v.get("bound") {
        None | Some(Json::Null) => default_bound.clone(),
        Some(Json::String(s)) => parse_rat(s, "series bound")?,
        Some(Json::Number(n)) => parse_rat(&n.to_string(), "series bound")?,
        Some(_) => return Err(bad("\"bound\" must be a string \"p/q\"")),
    };
    let mut terms = Vec::new();
    for t in v.get("terms").and_then(Json::as_array).ok_or_else(|| bad("\"terms\" must be an array"))? {
        let exp = match t.get("exp") {
            Some(Json::String(s)) => parse_rat(s, "series exponent")?,
            Some(Json::Number(n)) => parse_rat(&n.to_string(), "series exponent")?,
            _ => return Err(bad("each term needs \"exp\"")),
        };
        let coeff = t.get("coeff").and_then(Json::as_str).ok_or_else(|| bad("each term needs a string \"coeff\""))?;
        terms.push((exp, parse_k(coeff, field)?));
    }
    Ok(PSeries::new(ram, terms, &bound, RatFn::zero(field))?)
}

pub fn candidates_json(cs: &[OneForm<RatFn>]) -> Json {
    Json::Array(cs.iter().map(kform_json).collect())
}

/// Plain-text rendering: one `path: value` line per leaf.
pub fn render_text(v: &Json) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn walk(v: &Json, path: &str, out: &mut String) {
    match v {
        Json::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, &p, out);
            }
        }
        Json::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        Json::String(s) => out.push_str(&format!("{path}: {s}\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}
