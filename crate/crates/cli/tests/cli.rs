use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const Z2_ZBAR: &str = r#"{"h":[[0,0],[0,0],[1,0]],"g":[[0,0],[1,0]]}"#;
const COS: &str = r#"{"phi1":{"-1":[0.5,0],"0":[0,0],"1":[0.5,0]},"phi2":{}}"#;

fn hpk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpk")).args(args).output().expect("run hpk")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = hpk(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

fn domain_error(args: &[&str]) -> Value {
    let out = hpk(args);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

#[test]
fn zeros_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zeros.csv");
    let v = ok(&["zeros", "--f", Z2_ZBAR, "--csv", csv.to_str().unwrap()]);
    assert_eq!(v["distinct"], 4);
    assert_eq!(v["index_sum"], 2);
    assert_eq!(v["within_bound"], true);
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,index,orientation,residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r.contains(",-1,reversing,")).count(), 1);
}

#[test]
fn file_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("f.json");
    fs::write(&p, Z2_ZBAR).unwrap();
    let from_file = ok(&["zeros", "--f", &format!("@{}", p.display())]);
    assert_eq!(from_file, ok(&["zeros", "--f", Z2_ZBAR]));
}

#[test]
fn cofactor_then_check_product() {
    let v = ok(&["cofactor", "--f", Z2_ZBAR, "--alpha", "-1.5"]);
    let big_f = serde_json::to_string(&v["F"]).unwrap();
    assert_eq!(v["fF"]["h"]["coeffs"][4], serde_json::json!([-1.5, 0.0]));
    let check = ok(&["check-product", "--f", Z2_ZBAR, "--F", &big_f]);
    assert_eq!(check["harmonic"], true);
    assert_eq!(check["k_constant"], true);

    let not_cofactor = r#"{"h":[[0,0],[0,0],[1,0]],"g":[[0,0],[1,0]]}"#;
    let check = ok(&["check-product", "--f", Z2_ZBAR, "--F", not_cofactor]);
    assert_eq!(check["harmonic"], false);
}

#[test]
fn alpha_must_be_nonzero_real() {
    for bad in ["0", "1+2i", "i", "[0,1]"] {
        let v = domain_error(&["cofactor", "--f", Z2_ZBAR, "--alpha", bad]);
        assert_eq!(v["error"], "InvalidAlpha");
        assert_eq!(v["message"], "alpha must be a nonzero real");
    }
}

#[test]
fn dilatation_and_square_check() {
    let d = ok(&["dilatation", "--f", Z2_ZBAR]);
    assert_eq!(d["num"]["coeffs"], serde_json::json!([[1.0, 0.0]]));
    assert_eq!(d["den"]["coeffs"], serde_json::json!([[0.0, 0.0], [2.0, 0.0]]));
    let e = domain_error(&["dilatation", "--f", r#"{"h":[[3,0]],"g":[[0,0],[1,0]]}"#]);
    assert_eq!(e["error"], "ConstantAnalyticPart");

    assert_eq!(ok(&["square-check", "--f", Z2_ZBAR])["harmonic"], false);
    let s = ok(&["square-check", "--f", r#"{"h":[[0,0],[0,0],[1,0]],"g":[[2,0]]}"#]);
    assert_eq!(s["harmonic"], true);
    assert_eq!(s["degree_criterion"], true);
}

#[test]
fn constant_input_is_refused() {
    let e = domain_error(&["cofactor", "--f", r#"{"h":[[1,0]],"g":[]}"#, "--alpha", "2"]);
    assert_eq!(e["error"], "ConstantInput");
}

#[test]
fn dirichlet_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let trace = dir.path().join("trace.csv");
    let v = ok(&[
        "dirichlet",
        "--boundary",
        COS,
        "--alpha",
        "1",
        "--samples",
        "100",
        "--grid-dump",
        grid.to_str().unwrap(),
        "--trace-csv",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(v["h"]["coeffs"], serde_json::json!([[0.0, 0.0], [0.5, 0.0]]));
    assert_eq!(v["g"]["coeffs"], serde_json::json!([[0.0, 0.0], [0.5, 0.0]]));
    let cof = v["audit"]["cofactor"]["max_deviation"].as_f64().unwrap();
    let prod = v["audit"]["product"]["max_deviation"].as_f64().unwrap();
    assert!((cof - std::f64::consts::SQRT_2).abs() <= 1e-9);
    assert!((prod - (1.0 + std::f64::consts::SQRT_2) / 2.0).abs() <= 1e-9);
    assert!(v["interior_identity"]["max_deviation"].as_f64().unwrap() <= 1e-12);
    assert!(v["poisson_check"]["max_deviation"].as_f64().unwrap() <= 1e-10);

    let g = fs::read_to_string(grid).unwrap();
    assert_eq!(g.lines().next(), Some("r,theta,re,im"));
    assert_eq!(g.lines().count(), 1 + 32 * 32);
    let t = fs::read_to_string(trace).unwrap();
    assert_eq!(t.lines().next(), Some("theta,actual_re,actual_im,claimed_re,claimed_im"));
    assert_eq!(t.lines().count(), 101);
}

#[test]
fn dirichlet_rejects_asymmetric_data() {
    let bad = r#"{"phi1":{"-1":[0.5,0],"1":[0.25,0]},"phi2":{}}"#;
    let e = domain_error(&["dirichlet", "--boundary", bad, "--alpha", "1"]);
    assert_eq!(e["error"], "InvalidInput");
}

#[test]
fn product_zeros_union() {
    let v = ok(&["product-zeros", "--f", Z2_ZBAR, "--alpha", "2"]);
    assert_eq!(v["fF"]["distinct"], 7);
    assert_eq!(v["fF"]["with_multiplicity"], 8);
    assert_eq!(v["fF"]["bound"], 8);
    assert_eq!(v["union_holds"], true);
}

#[test]
fn degenerate_degrees() {
    let e = domain_error(&["zeros", "--f", r#"{"h":[[0,0],[1,0]],"g":[[0,0],[-1,0]]}"#]);
    assert_eq!(e["error"], "DegenerateDegrees");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hpk(&["experiment", "--seed", "1", "--trials", "0", "--deg-h", "2", "--deg-g", "1"]).status.code(), Some(2));
    assert_eq!(hpk(&["experiment", "--seed", "1", "--trials", "2", "--deg-h", "2", "--deg-g", "2"]).status.code(), Some(2));
    assert_eq!(hpk(&["zeros"]).status.code(), Some(2));
    assert_eq!(hpk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bad_json_is_a_domain_error() {
    let e = domain_error(&["zeros", "--f", "{not json"]);
    assert_eq!(e["error"], "InvalidInput");
}

#[test]
fn experiment_is_deterministic_across_threads() {
    let args = ["experiment", "--seed", "7", "--trials", "20", "--deg-h", "3", "--deg-g", "2"];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hpk"))
            .args(args)
            .env("HPK_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stderr).contains("wall_time"));
        out.stdout
    };
    let a = run("1");
    assert_eq!(a, run("3"));
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["trials_run"], 20);
    assert_eq!(v["bound_violations"], 0);
    assert!(v.get("wall_time").is_none());
}
