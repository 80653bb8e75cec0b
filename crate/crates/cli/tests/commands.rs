use std::process::Command as Process;

use integrabilis::run;
use serde_json::Value;

fn run_json(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("integrabilis").chain(args.iter().copied());
    let (status, out) = run(argv);
    (status, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn construct_quadratic_worked_example() {
    let (status, doc) = run_json(&["construct-quadratic", "--k", "x", "--h", "0", "--term", "1:y"]);
    assert_eq!(status, 0);
    let r = &doc["result"];
    assert_eq!(r["H"][0], "2 / (y^2 - x)");
    assert_eq!(r["H"][1], "y / (x*y^2 - x^2)");
    assert_eq!(r["omega"]["A"], "y / (x*y^2 - x^2)");
    assert_eq!(r["omega"]["B"], "-2 / (y^2 - x)");
    assert_eq!(r["verification"]["all_ok"], true);
    assert_eq!(doc["inputs"]["terms"][0], "1:y");
}

#[test]
fn obstruction_single_constant() {
    let (status, doc) = run_json(&["obstruction", "--constants", "1", "--n", "2"]);
    assert_eq!(status, 0);
    assert_eq!(doc["result"]["verdict"], "Obstructed");
    let (_, doc) = run_json(&["obstruction", "--constants", "1", "--n", "3"]);
    assert_eq!(doc["result"]["verdict"], "Unobstructed");
}

#[test]
fn search_rfi_finds_y2_over_x() {
    let (status, doc) = run_json(&["search-rfi", "--P", "y", "--Q", "-2*x", "--d", "2"]);
    assert_eq!(status, 0);
    let s = &doc["result"]["search"];
    assert_eq!(s["verdict"], "Found");
    assert_eq!((s["A"].as_str(), s["B"].as_str()), (Some("y^2"), Some("x")));
    assert_eq!(s["residual"], "0");
}

#[test]
fn cyclic_verify_and_factor_agree() {
    let (status, doc) = run_json(&["construct-cyclic", "--n", "3", "--k", "x^2 + y", "--term", "1:1 + x*l"]);
    assert_eq!(status, 0, "{doc}");
    let r = &doc["result"];
    let report = &r["verification"];
    for key in ["gamma_nonzero", "wedge_zero", "trace_zero", "integrating_factor_ok"] {
        assert_eq!(report[key], true, "{key}");
    }
    // one term projected over three conjugates: constants c, c*w, c*w^2 sum to zero
    assert_eq!(report["constants_independent"], false);
    let (a, b) = (r["omega"]["A"].as_str().unwrap(), r["omega"]["B"].as_str().unwrap());
    let (status, doc) = run_json(&["check-factor", "--P", a, "--Q", b, "--n", "3", "--k", "x^2 + y"]);
    assert_eq!(status, 0);
    assert_eq!(doc["result"]["integrating_factor"], true);
    let psi = &r["psi"];
    let mut args = vec!["verify", "--P", a, "--Q", b, "--n", "3", "--k", "x^2 + y"];
    let v = psi["v"].as_str().unwrap();
    args.extend(["--v", v]);
    let terms: Vec<String> = psi["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| format!("{}:{}", t["c"].as_str().unwrap(), t["u"].as_str().unwrap()))
        .collect();
    for t in &terms {
        args.extend(["--term", t]);
    }
    let (status, doc) = run_json(&args);
    assert_eq!(status, 0, "{doc}");
    assert_eq!(&doc["result"]["verification"], report);
}

#[test]
fn puiseux_descent_exponential_step() {
    let v = r#"{"ram":1,"terms":[{"exp":"1","coeff":"x*y + 1"}],"bound":"-3"}"#;
    let (status, doc) = run_json(&[
        "puiseux-descent", "--case", "exponential", "--R", "x + 2*y", "--v", v, "--P", "y/(x*y + 1) + 1", "--Q",
        "x/(x*y + 1) + 2",
    ]);
    assert_eq!(status, 0, "{doc}");
    let c = &doc["result"]["candidates"];
    assert_eq!(c.as_array().unwrap().len(), 1);
    assert_eq!(c[0]["A"], "(x*y + y + 1) / (x*y + 1)");
    assert_eq!(doc["result"]["selected"], 0);
}

#[test]
fn error_documents_and_exit_codes() {
    let (status, doc) = run_json(&["search-rfi", "--P", "x + * y", "--Q", "1", "--d", "1"]);
    assert_eq!(status, 2);
    assert_eq!(doc["error"]["code"], "SyntaxError");
    assert_eq!(doc["error"]["column"], 5);
    let (status, doc) = run_json(&["check-factor", "--P", "l + 1", "--Q", "1", "--n", "2", "--k", "x"]);
    assert_eq!(status, 2);
    assert_eq!(doc["error"]["code"], "ContextError");
    let (status, doc) = run_json(&["construct-quadratic", "--k", "y^2", "--term", "1:y"]);
    assert_eq!(status, 1);
    assert_eq!(doc["error"]["code"], "DegenerateG");
    let (status, doc) = run_json(&["check-factor", "--P", "1/(x - x)", "--Q", "1", "--n", "2", "--k", "x"]);
    assert_eq!(status, 1);
    assert_eq!(doc["error"]["code"], "DivisionByZero");
    let (status, _) = run(["integrabilis", "search-rfi", "--P", "y"]);
    assert_eq!(status, 2);
}

#[test]
fn output_is_deterministic_and_text_mode_works() {
    let args = ["integrabilis", "construct-quadratic", "--k", "x - y", "--h", "x", "--term", "z:y^2", "--term", "2:x"];
    let (s1, a) = run(args);
    let (s2, b) = run(args);
    assert_eq!((s1, s2), (0, 0));
    assert_eq!(a, b);
    let (_, text) = run(["integrabilis", "obstruction", "--constants", "1", "--n", "2", "--output", "text"]);
    assert!(text.lines().any(|l| l == "result.verdict: Obstructed"), "{text}");
}

#[test]
fn binary_exit_statuses() {
    let bin = env!("CARGO_BIN_EXE_integrabilis");
    let ok = Process::new(bin).args(["obstruction", "--constants", "1, z", "--n", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let domain = Process::new(bin).args(["construct-cyclic", "--n", "5", "--k", "x", "--term", "1:y"]).output().unwrap();
    assert_eq!(domain.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&domain.stdout).unwrap();
    assert_eq!(doc["error"]["code"], "OrderIncompatible");
    let usage = Process::new(bin).args(["construct-quadratic"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
