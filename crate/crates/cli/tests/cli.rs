use std::path::PathBuf;
use std::process::{Command, Output};

use arthur_coeff::orbits::enumerate_inducing_pairs;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arthur-coeff"))
        .args(args)
        .env_remove("ARTHUR_COEFF_PREC")
        .output()
        .expect("run arthur-coeff")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn number(v: &Value) -> f64 {
    v["value"].as_str().expect("decimal string").parse().expect("number")
}

fn field_file(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/fields").join(name);
    root.to_str().expect("utf-8 path").to_string()
}

#[test]
fn gl2_coefficient_rows() {
    let v = json(&["coeff", "--d", "1", "--r", "2", "--S", ""]);
    for key in ["config", "query", "results", "diagnostics"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["weyl_weight"], "1/2");
    assert!((number(&rows[0]["a_tilde"]) - 1.0).abs() < 1e-15);
    assert!((number(&rows[1]["a_tilde"]) + 0.690775648760).abs() < 1e-11);
    assert_eq!(rows[1]["a"]["precision_bits"], 256);
    assert!(rows[1]["a"]["residual"].is_string());
    assert_eq!(v["config"]["precision_bits"], 256);
    assert_eq!(v["config"]["tolerance_exponent"], 128);
}

#[test]
fn gl1_single_row() {
    let v = json(&["coeff", "--d", "1", "--r", "1"]);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!((number(&rows[0]["a_tilde"]) - 1.0).abs() < 1e-15);
}

#[test]
fn rows_match_enumeration() {
    let v = json(&["coeff", "--d", "2", "--r", "2", "--S", "2,3"]);
    let rows = v["results"].as_array().unwrap();
    let classes = enumerate_inducing_pairs(2, 2).unwrap();
    assert_eq!(rows.len(), classes.len());
    for (row, class) in rows.iter().zip(&classes) {
        assert_eq!(row["levi"], class.levi.to_string());
        assert_eq!(row["places"], "2,3");
    }
}

#[test]
fn n_alone_means_d_one() {
    let a = json(&["coeff", "--n", "3"]);
    let b = json(&["coeff", "--d", "1", "--r", "3"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["query"]["shape"]["d"], 1);
}

#[test]
fn expansion_carries_local_symbols() {
    let v = json(&["expansion", "--d", "1", "--r", "2"]);
    let rows = v["results"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["local_integral"].as_str().unwrap().starts_with("J_L^G")));
    assert!((number(&v["diagnostics"]["minimal_levi_volume"]) - 1.0).abs() < 1e-15);
}

#[test]
fn xi_at_two() {
    let v = json(&["zeta", "--eval", "xi", "--at", "2"]);
    let c = &v["results"][0]["coefficient"];
    assert!((number(c) - std::f64::consts::PI / 6.0).abs() < 1e-15);
}

#[test]
fn gaussian_field_residue() {
    let v = json(&["zeta", "--field", &field_file("gaussian.json"), "--at", "1", "--prec", "96"]);
    let first = &v["results"][0];
    assert_eq!(first["power"], -1);
    assert!((number(&first["coefficient"]) - 0.5).abs() < 1e-20);
}

#[test]
fn covolume_suite_reports_residual() {
    let v = json(&["verify", "covolumes", "--n", "8"]);
    assert_eq!(v["results"][0]["passed"], true);
    let worst: f64 = v["results"][0]["max_residual"].as_str().unwrap().parse().unwrap();
    assert!(worst < 1e-60);
}

#[test]
fn orbits_for_d2_r2() {
    let v = json(&["orbits", "--d", "2", "--r", "2"]);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["induced_orbit"] == serde_json::json!([2, 2])));
}

#[test]
fn volumes_identity() {
    let v = json(&["volumes", "--d", "2", "--r", "3", "--prec", "128"]);
    let worst: f64 = v["diagnostics"]["max_volume_identity_residual"].as_str().unwrap().parse().unwrap();
    assert!(worst < 1e-30);
}

#[test]
fn table_output() {
    let out = run(&["coeff", "--n", "2", "--format", "table", "--prec", "64"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# precision 64 bits"));
    assert!(text.contains("a_tilde.value"));
}

#[test]
fn env_precision() {
    let out = Command::new(env!("CARGO_BIN_EXE_arthur-coeff"))
        .args(["zeta", "--at", "3"])
        .env("ARTHUR_COEFF_PREC", "80")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision_bits"], 80);
}

#[test]
fn failures_exit_nonzero() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--d", "2", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--n", "2", "--S", "4"]).status.code(), Some(2));
    // a tolerance finer than the working precision cannot be met
    assert_eq!(run(&["coeff", "--n", "3", "--prec", "64", "--tol-exp", "400"]).status.code(), Some(3));
}
