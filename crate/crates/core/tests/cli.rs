use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn run(cmd: &str, dir: &Path, doc: &str, extra: &[&str]) -> (i32, PathBuf) {
    let input = dir.join(format!("{cmd}.json"));
    std::fs::write(&input, doc).unwrap();
    let out = dir.join(format!("{cmd}.report.json"));
    let status = Command::new(env!("CARGO_BIN_EXE_tailcalc"))
        .arg(cmd)
        .arg("--in")
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .status()
        .unwrap();
    (status.code().unwrap(), out)
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const BURR: &str = r#"{"law": {"family": "burr", "beta": "beta", "tau": "3/2", "gamma": "10",
  "moments": ["1", "mu1", "mu2", "mu3", "mu4"]}, "weights": "symbolic", "m": 4, "compare": "burr"}"#;

#[test]
fn burr_report_lists_eight_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run("expand", dir.path(), BURR, &[]);
    assert_eq!(code, 0);
    let r = read(&out);
    let coeffs = r["result"]["tail"]["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 8);
    assert_eq!(coeffs[0]["exact"], "C[15]*beta^10");
    assert_eq!(coeffs[0]["float"], Value::Null);
    let diff = r["result"]["reference_diff"].as_array().unwrap();
    let matches: Vec<bool> = diff.iter().map(|d| d["matches"].as_bool().unwrap()).collect();
    assert_eq!(matches, [true, true, true, false, true, true, true, false]);
    assert_eq!(r["input"]["m"], 4);
}

#[test]
fn reruns_are_byte_identical_and_timestamps_live_in_the_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let (_, out) = run("expand", dir.path(), BURR, &["--pretty"]);
    let first = std::fs::read(&out).unwrap();
    let (_, out) = run("expand", dir.path(), BURR, &["--pretty"]);
    assert_eq!(first, std::fs::read(&out).unwrap());
    let meta = read(&dir.path().join("expand.report.json.meta.json"));
    assert!(meta["elapsed_seconds"].is_number());
    assert!(!String::from_utf8(first).unwrap().contains("elapsed"));
}

#[test]
fn implicit_renewal_report() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "h": {"family": "exponential", "theta": "theta"},
        "k": {"family": "pareto", "alpha": "alpha"},
        "m": 1,
        "assumptions": {"alpha": 3.5, "theta": 0.05}
    });
    let (code, out) = run("implicit-renewal", dir.path(), &doc.to_string(), &[]);
    assert_eq!(code, 0);
    let r = read(&out);
    let p0 = &r["result"]["tail"]["coefficients"][0];
    assert_eq!(p0["exact"], "-1/(([theta^(alpha)*Gamma(alpha+1)] - 1))");
    let g = 0.05f64.powf(3.5) * statrs::function::gamma::gamma(4.5);
    assert!((p0["float"].as_f64().unwrap() - 1.0 / (1.0 - g)).abs() < 1e-12);
}

#[test]
fn malformed_input_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run("expand", dir.path(), "{\"law\": ", &[]);
    assert_eq!(code, 1);
    assert!(!out.exists());
    let (code, out) = run("queue", dir.path(), r#"{"service": {"family": "pareto"}, "m": 1}"#, &[]);
    assert_eq!(code, 1);
    assert!(!out.exists());
}

#[test]
fn precondition_and_indeterminate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"law": {"family": "pareto", "alpha": "2"}, "weights": {"explicit": ["1"]}, "m": 2}"#;
    assert_eq!(run("expand", dir.path(), doc, &[]).0, 2);
    let unstable = r#"{"service": {"family": "pareto", "alpha": "7/2"}, "mean_interarrival": "1/5", "m": 1}"#;
    assert_eq!(run("queue", dir.path(), unstable, &[]).0, 2);
    // a C_{α+2} = ½α(α+1)μ₂C_{α;2} for weights (1, 1/2, 1/3), α = 3, μ₂ = 2
    // C2 = 49/36, C3 = 251/216, C5 = 8051/7776
    let cancel = json!({
        "alpha": "3", "rho": "-2", "g_index": "2",
        "aux_limit": "-24*(8051/7776 - 251/216*49/36)/(8051/7776)",
        "weights": {"explicit": ["1", "1/2", "1/3"]},
        "moments": ["1", "0", "2"]
    });
    assert_eq!(run("classify-2rv", dir.path(), &cancel.to_string(), &[]).0, 3);
}

#[test]
fn validate_writes_csv_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("v.json");
    std::fs::write(
        &input,
        r#"{"law": {"family": "pareto", "alpha": "3"}, "weights": {"ar1": "1/2"}, "m": 1,
            "mc": {"samples": 20000, "thresholds": [2, 4], "seed": 3, "truncation": 16}}"#,
    )
    .unwrap();
    let out = dir.path().join("v.csv");
    let st = Command::new(env!("CARGO_BIN_EXE_tailcalc"))
        .args(["validate", "--in"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "threshold,estimate,ci_lo,ci_hi,expansion_1term,expansion_2term");
    assert_eq!(lines.count(), 2);
}

#[test]
fn float_mode_matches_exact_mode_numerically() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"service": {"family": "pareto", "alpha": "7/2"}, "mean_interarrival": "2", "m": 2}"#;
    let (_, out) = run("queue", dir.path(), doc, &[]);
    let exact = read(&out);
    let (_, out) = run("queue", dir.path(), doc, &["--mode", "float"]);
    let float = read(&out);
    assert_eq!(float["mode"], "float");
    let a = exact["result"]["tail"]["coefficients"].as_array().unwrap();
    let b = float["result"]["tail"]["coefficients"].as_array().unwrap();
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x["float"].as_f64().unwrap(), y["float"].as_f64().unwrap());
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
    }
}
