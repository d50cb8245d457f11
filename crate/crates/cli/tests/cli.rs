use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-double")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn iwasawa_of_identity() {
    let o = run(&["iwasawa", "--matrix", "1,0,0,0,0,0,1,0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["g_plus"], serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]));
    assert_eq!(v["g_minus"], v["g_plus"]);
    assert_eq!(v["renormalized"], false);
}

#[test]
fn iwasawa_of_upper_triangular() {
    let o = run(&["iwasawa", "--matrix", "2,0,1,-1,0,0,0.5,0"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["g_minus"], v["input"]);
    assert_eq!(v["a"], 2.0);
}

#[test]
fn iwasawa_rejects_non_unimodular() {
    let o = run(&["iwasawa", "--matrix", "2,0,0,0,0,0,2,0"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn flow_at_time_zero_is_one_row() {
    let o = run(&["flow", "--T", "0", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[0].starts_with("t,re_alpha,im_alpha,re_beta,im_beta,a,re_z,im_z,"));
    assert!(lines[1].starts_with("0"));
}

#[test]
fn flow_methods_agree() {
    let o = run(&["flow", "--T", "2", "--steps", "400", "--method", "both", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn flow_rejects_non_character_level() {
    let o = run(&["flow", "--method", "factorization", "--eta-minus", "1,0,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn flow_reports_blowup() {
    let init = "0.6,0,0.8,0,2,0.5,0.3,50,50,50,0,0,0";
    let o =
        run(&["flow", "--method", "rk4", "--init", init, "--T", "5", "--steps", "10", "--hamiltonian", "killing_real"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(code(&run(&["verify", "nonsense"])), 2);
}

#[test]
fn bad_tolerances_are_usage_errors() {
    assert_eq!(code(&run(&["verify", "pairing", "--tol", "no.such=1"])), 2);
    assert_eq!(code(&run(&["verify", "pairing", "--tol.flow.gap=-1"])), 2);
    assert_eq!(code(&run(&["verify", "pairing", "--tol", "flow.gap"])), 2);
    assert_eq!(code(&run(&["verify", "pairing", "--tol", "flow.gap=0"])), 2);
}

#[test]
fn verify_involutivity_passes() {
    let o = run(&["verify", "involutivity"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let checks = v.as_array().or_else(|| v["checks"].as_array()).expect("list of checks");
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn impossible_tolerance_fails_verification() {
    let o = run(&["verify", "iwasawa", "--tol", "iwasawa.reconstruction=1e-300"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn output_is_reproducible() {
    let a = run(&["flow", "--T", "1", "--steps", "50", "--seed", "11"]);
    let b = run(&["flow", "--T", "1", "--steps", "50", "--seed", "11"]);
    let c = run(&["flow", "--T", "1", "--steps", "50", "--seed", "12"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let cfg = scratch("cli-config.json");
    let out = scratch("cli-config-out.csv");
    std::fs::write(&cfg, r#"{"seed": 5, "T": 0.5, "steps": 10, "method": "rk4", "format": "csv"}"#).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "flow", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 12);
    let o = run(&["--config", cfg.to_str().unwrap(), "flow", "--steps", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 6);

    std::fs::write(&cfg, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap(), "verify", "pairing"])), 2);
}
