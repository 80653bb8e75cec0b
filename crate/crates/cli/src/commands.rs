//! Command definitions and dispatch.

use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use integrabilis_core::exceptional::{
    build_cyclic, build_quadratic, check_integrating_factor, rational_fi_search, rfi_residual,
    verify_elem_integral, CyclicSpec, QuadraticSpec, RfiVerdict,
};
use integrabilis_core::puiseux::{descent_candidates, select_candidate, StepKind};
use integrabilis_core::scalars::{degree_obstruction, Obstruction};
use integrabilis_core::{CycloField, CycloNumber, ExtDescriptor, LogSum, OneForm, PlaneField, Rat};
use serde_json::{json, Value as Json};

use crate::error::CliError;
use crate::parse::{parse_constant, parse_k, parse_l};
use crate::serial::{
    candidates_json, desc_json, kform_json, logsum_json, parse_series, report_json, series_json,
};

#[derive(Debug, Parser)]
#[command(name = "integrabilis", version, about = "Exceptional elementary-integrable planar vector fields")]
pub struct Cli {
    /// Cyclotomic order of the constant field Q(z), z a primitive N-th root of unity.
    #[arg(long = "N", global = true, default_value_t = 12)]
    pub order: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Exponential,
    Logarithmic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadratic construction from k, h and terms c:g.
    ConstructQuadratic {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        h: String,
        /// "c:g", repeatable.
        #[arg(long = "term", required = true, allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Cyclic construction in K(l), l^n = k, from w_v and terms c:w_u.
    ConstructCyclic {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long = "wv", default_value = "0", allow_hyphen_values = true)]
        w_v: String,
        /// "c:w_u", repeatable; w_u may use l.
        #[arg(long = "term", required = true, allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Checks that psi = v + sum c log u integrates l*omega, omega = P dx + Q dy.
    Verify {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        v: String,
        /// "c:u", repeatable.
        #[arg(long = "term", allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Checks d(l*omega) = 0.
    CheckFactor {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Searches rational first integrals A/B of bounded degree for omega = P dx + Q dy.
    SearchRfi {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        d: u32,
    },
    /// Degree obstruction for the constants c_1..c_m (comma separated).
    Obstruction {
        #[arg(long, allow_hyphen_values = true)]
        constants: String,
        #[arg(long)]
        n: u32,
    },
    /// Candidate one-forms from a series relation over one tower step.
    PuiseuxDescent {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long = "R", allow_hyphen_values = true)]
        r: String,
        /// "c:SERIES" with SERIES in JSON form, repeatable.
        #[arg(long = "term", allow_hyphen_values = true)]
        terms: Vec<String>,
        /// The series v in JSON form.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Truncation used for series that give no bound.
        #[arg(long, default_value = "-4", allow_hyphen_values = true)]
        bound: String,
        /// Optional target omega = P dx + Q dy for candidate selection.
        #[arg(long = "P", requires = "q", allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long = "Q", requires = "p", allow_hyphen_values = true)]
        q: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ConstructQuadratic { .. } => "construct-quadratic",
            Command::ConstructCyclic { .. } => "construct-cyclic",
            Command::Verify { .. } => "verify",
            Command::CheckFactor { .. } => "check-factor",
            Command::SearchRfi { .. } => "search-rfi",
            Command::Obstruction { .. } => "obstruction",
            Command::PuiseuxDescent { .. } => "puiseux-descent",
        }
    }

    /// The flags as given, for the echo block of the output document.
    pub fn inputs(&self) -> Json {
        match self {
            Command::ConstructQuadratic { k, h, terms } => json!({ "k": k, "h": h, "terms": terms }),
            Command::ConstructCyclic { n, k, w_v, terms } => json!({ "n": n, "k": k, "wv": w_v, "terms": terms }),
            Command::Verify { p, q, n, k, v, terms } => {
                json!({ "P": p, "Q": q, "n": n, "k": k, "v": v, "terms": terms })
            }
            Command::CheckFactor { p, q, n, k } => json!({ "P": p, "Q": q, "n": n, "k": k }),
            Command::SearchRfi { p, q, d } => json!({ "P": p, "Q": q, "d": d }),
            Command::Obstruction { constants, n } => json!({ "constants": constants, "n": n }),
            Command::PuiseuxDescent { case, r, terms, v, bound, p, q } => json!({
                "case": match case { Case::Exponential => "exponential", Case::Logarithmic => "logarithmic" },
                "R": r, "terms": terms, "v": v, "bound": bound, "P": p, "Q": q,
            }),
        }
    }
}

/// Splits `"c:rest"` at the first colon.
fn split_term(t: &str) -> Result<(&str, &str), CliError> {
    t.split_once(':')
        .ok_or_else(|| CliError::usage(format!("term {t:?} must have the form \"c:expr\"")))
}

fn descriptor(field: &Arc<CycloField>, n: u32, k: &str) -> Result<Arc<ExtDescriptor>, CliError> {
    Ok(ExtDescriptor::with_default_root(n, parse_k(k, field)?)?)
}

fn omega_of(field: &Arc<CycloField>, p: &str, q: &str) -> Result<OneForm<integrabilis_core::RatFn>, CliError> {
    Ok(OneForm::new(parse_k(p, field)?, parse_k(q, field)?))
}

fn logsum(desc: &Arc<ExtDescriptor>, v: &str, terms: &[String]) -> Result<LogSum, CliError> {
    let v = parse_l(v, desc)?;
    let mut ts = Vec::new();
    for t in terms {
        let (c, u) = split_term(t)?;
        ts.push((parse_constant(c, desc.field())?, parse_l(u, desc)?));
    }
    Ok(LogSum::new(v, ts)?)
}

/// Runs a command and returns the `result` block of the output document.
pub fn run_command(cmd: &Command, order: u32) -> Result<Json, CliError> {
    let field = CycloField::new(order)?;
    match cmd {
        Command::ConstructQuadratic { k, h, terms } => {
            let mut ts = Vec::new();
            for t in terms {
                let (c, g) = split_term(t)?;
                ts.push((parse_constant(c, &field)?, parse_k(g, &field)?));
            }
            let spec = QuadraticSpec { k: parse_k(k, &field)?, h: parse_k(h, &field)?, terms: ts };
            let out = build_quadratic(&spec)?;
            let report = verify_elem_integral(&out.omega, &out.psi)?;
            Ok(json!({
                "desc": desc_json(&out.desc),
                "H": [out.h_field.0.to_string(), out.h_field.1.to_string()],
                "omega": kform_json(&out.omega),
                "psi": logsum_json(&out.psi),
                "verification": report_json(&report),
            }))
        }
        Command::ConstructCyclic { n, k, w_v, terms } => {
            let desc = descriptor(&field, *n, k)?;
            let mut ts = Vec::new();
            for t in terms {
                let (c, u) = split_term(t)?;
                ts.push((parse_constant(c, &field)?, parse_l(u, &desc)?));
            }
            let spec = CyclicSpec { desc: desc.clone(), w_v: parse_l(w_v, &desc)?, terms: ts };
            let out = build_cyclic(&spec)?;
            let report = verify_elem_integral(&out.omega, &out.psi)?;
            Ok(json!({
                "desc": desc_json(&desc),
                "omega": kform_json(&out.omega),
                "psi": logsum_json(&out.psi),
                "verification": report_json(&report),
            }))
        }
        Command::Verify { p, q, n, k, v, terms } => {
            let desc = descriptor(&field, *n, k)?;
            let omega = omega_of(&field, p, q)?;
            let psi = logsum(&desc, v, terms)?;
            let report = verify_elem_integral(&omega, &psi)?;
            Ok(json!({ "omega": kform_json(&omega), "psi": logsum_json(&psi), "verification": report_json(&report) }))
        }
        Command::CheckFactor { p, q, n, k } => {
            let desc = descriptor(&field, *n, k)?;
            let omega = omega_of(&field, p, q)?;
            Ok(json!({
                "desc": desc_json(&desc),
                "omega": kform_json(&omega),
                "integrating_factor": check_integrating_factor(&omega, &desc),
            }))
        }
        Command::SearchRfi { p, q, d } => {
            let x = PlaneField::new(parse_k(p, &field)?, parse_k(q, &field)?)?;
            let (h1, h2) = x.vector();
            let verdict = match rational_fi_search(&x, *d) {
                RfiVerdict::Found(a, b) => json!({
                    "verdict": "Found",
                    "A": a.to_string(),
                    "B": b.to_string(),
                    "residual": rfi_residual(&x, &a, &b).to_string(),
                }),
                RfiVerdict::NoneUpTo(m) => json!({ "verdict": "NoneUpTo", "degree": m }),
                RfiVerdict::Unknown => json!({ "verdict": "Unknown" }),
            };
            Ok(json!({ "field": [h1.to_string(), h2.to_string()], "search": verdict }))
        }
        Command::Obstruction { constants, n } => {
            let cs: Vec<CycloNumber> = constants
                .split(',')
                .map(|c| parse_constant(c, &field))
                .collect::<Result<_, _>>()?;
            Ok(match degree_obstruction(&cs, *n)? {
                Obstruction::Obstructed(r) => json!({
                    "verdict": "Obstructed",
                    "relation": r.iter().map(Rat::to_string).collect::<Vec<_>>(),
                }),
                Obstruction::Unobstructed => json!({ "verdict": "Unobstructed" }),
            })
        }
        Command::PuiseuxDescent { case, r, terms, v, bound, p, q } => {
            let bound: Rat = bound
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("--bound: expected a rational, got {bound:?}")))?;
            let kind = match case {
                Case::Exponential => StepKind::Exponential,
                Case::Logarithmic => StepKind::Logarithmic,
            };
            let step = integrabilis_core::TowerStep::new(kind, parse_k(r, &field)?)?;
            let mut us = Vec::new();
            for t in terms {
                let (c, s) = split_term(t)?;
                us.push((parse_constant(c, &field)?, parse_series(s, &field, &bound)?));
            }
            let v = parse_series(v, &field, &bound)?;
            let cands = descent_candidates(&step, &us, &v)?;
            let mut doc = json!({
                "v": series_json(&v),
                "u": us.iter().map(|(c, s)| json!({ "c": c.to_string(), "series": series_json(s) })).collect::<Vec<_>>(),
                "candidates": candidates_json(&cands),
            });
            if let (Some(p), Some(q)) = (p, q) {
                let omega = omega_of(&field, p, q)?;
                let chosen = select_candidate(&cands, &omega)?;
                doc["selected"] = match chosen {
                    Some(w) => json!(cands.iter().position(|c| *c == w)),
                    None => Json::Null,
                };
            }
            Ok(doc)
        }
    }
}

/// Full invocation on `args` (including the program name): exit status and
/// the text to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let mut doc = json!({
        "command": cli.command.name(),
        "N": cli.order,
        "inputs": cli.command.inputs(),
    });
    let status = match run_command(&cli.command, cli.order) {
        Ok(result) => {
            doc["result"] = result;
            0
        }
        Err(e) => {
            let mut err = json!({ "code": e.code(), "message": e.to_string() });
            if let CliError::Syntax { column, .. } | CliError::Context { column, .. } = &e {
                err["column"] = json!(column);
            }
            doc["error"] = err;
            e.exit_code()
        }
    };
    let text = match cli.output {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        Format::Text => crate::serial::render_text(&doc),
    };
    (status, text)
}
