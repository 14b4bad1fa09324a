use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(args)
        .env_remove("VERONESE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn field_reports_modulus_and_subfields() {
    let out = run(&["field", "--p", "3", "--m", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["modulus"], "x^3 + 2x + 1");
    assert_eq!(v["subfields"], serde_json::json!([3, 27]));
    let v = json(&run(&["field", "--p", "2", "--m", "2"]));
    assert_eq!(v["modulus"], "x^2 + x + 1");
}

#[test]
fn field_rejects_composite_characteristic() {
    let out = run(&["field", "--p", "4", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not prime"));
}

#[test]
fn build_writes_variety() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = run(&["build", "--p", "3", "--e", "1", "--t", "3", "--n", "2", "--sigma", "0,0,2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v = read(&path);
    assert_eq!(v["points"].as_array().unwrap().len(), 28);
    assert_eq!(v["coords"].as_array().unwrap().len(), 28);
    assert_eq!(v["coords"][0].as_array().unwrap().len(), 6);
}

#[test]
fn build_warns_on_collapse() {
    let out = run(&["build", "--p", "2", "--e", "1", "--t", "3", "--n", "2", "--sigma", "0,0,1"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("collapse: 5 of 6 monomials distinct"));
    assert_eq!(json(&out)["effective_n"], 5);
}

#[test]
fn norm_violation_is_fatal() {
    for extra in [&[][..], &["--allow-collapse"][..]] {
        let mut args = vec!["build", "--p", "2", "--t", "2", "--sigma", "0,0,0,0"];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1));
        assert!(stderr(&out).contains("|sigma| < q^t"), "{}", stderr(&out));
    }
}

#[test]
fn sigma_q_matches_sigma() {
    let a = json(&run(&["build", "--p", "2", "--e", "2", "--t", "2", "--sigma-q", "0,1"]));
    let b = json(&run(&["build", "--p", "2", "--e", "2", "--t", "2", "--sigma", "0,2"]));
    assert_eq!(a, b);
    assert_eq!(a["sigma_exponents"], serde_json::json!([0, 2]));
}

#[test]
fn code_track_27() {
    let out = run(&["code", "--p", "3", "--e", "1", "--t", "3", "--n", "2", "--sigma", "0,0,2", "--workers", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!((r["nu"].as_u64(), r["kappa"].as_u64(), r["delta"].as_u64()), (Some(28), Some(22), Some(6)));
    assert_eq!(r["status"], "almost-MDS");
    assert_eq!(r["delta_exact"], true);
}

#[test]
fn code_mds_cases() {
    let r = json(&run(&["code", "--p", "2", "--e", "1", "--t", "5", "--n", "2", "--sigma", "0,2"]));
    assert_eq!((r["nu"].as_u64(), r["kappa"].as_u64(), r["delta"].as_u64()), (Some(33), Some(29), Some(5)));
    assert_eq!(r["status"], "MDS");
    let r = json(&run(&["code", "--p", "5", "--e", "1", "--t", "1", "--n", "2", "--sigma", "0,0"]));
    assert_eq!((r["nu"].as_u64(), r["kappa"].as_u64(), r["delta"].as_u64()), (Some(6), Some(3), Some(4)));
    assert_eq!(r["status"], "MDS");
    assert_eq!(r["min_weight_support_count"], 15);
}

#[test]
fn reports_are_reproducible() {
    let args = ["code", "--p", "2", "--t", "4", "--sigma", "0,2"];
    let a = json(&run(&[&args[..], &["--workers", "1"]].concat()));
    let b = json(&run(&[&args[..], &["--workers", "3"]].concat()));
    assert_eq!(a["canonical_hash"], b["canonical_hash"]);
    let strip = |mut v: Value| {
        v["timings"] = Value::Null;
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn budget_gives_bound_and_exit_2() {
    let out = run(&["code", "--p", "3", "--t", "3", "--sigma", "0,0,2", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["delta_exact"], false);
    assert!(r["delta"].is_null());
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(["code", "--p", "3", "--t", "3", "--sigma", "0,0,2"])
        .env("VERONESE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // a flag beats the environment
    let out = Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(["code", "--p", "3", "--t", "3", "--sigma", "0,0,2", "--budget", "1000000"])
        .env("VERONESE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"p": 2, "e": 1, "t": 4, "n": 2, "sigma": [0, 2], "budget": 100}"#).unwrap();
    let out = run(&["code", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let out = run(&["code", "--config", cfg.to_str().unwrap(), "--budget", "100000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["delta"], 4);

    std::fs::write(&cfg, r#"{"p": 2, "bogus": 1}"#).unwrap();
    let out = run(&["code", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bogus"));
}

#[test]
fn code_from_variety_file() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    let csv = dir.path().join("h.csv");
    assert!(run(&["build", "--p", "2", "--t", "4", "--sigma", "0,2", "--out", v.to_str().unwrap()]).status.success());
    let out = run(&["code", "--input", v.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json(&out)["delta"], 4);
    let h = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(h.lines().count(), 4);
    assert_eq!(h.lines().next().unwrap().split(',').count(), 17);
}

#[test]
fn collapsed_code_needs_override() {
    let args = ["code", "--p", "2", "--t", "3", "--sigma", "0,0,1"];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--allow-collapse"));
    let out = run(&[&args[..], &["--allow-collapse"]].concat());
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json(&out)["effective_n"], 5);
}

#[test]
fn missing_parameters_are_named() {
    let out = run(&["code", "--p", "3", "--sigma", "0,0,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--t"));
    let out = run(&["code", "--p", "3", "--t", "3", "--sigma", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("identity"));
}

#[test]
fn verify_properties() {
    let out = run(&["verify", "general-position", "--k", "4", "--p", "3", "--e", "1", "--t", "3", "--n", "2", "--sigma", "0,0,2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["checked"], 20475);

    let out = run(&["verify", "dep-classification", "--p", "2", "--t", "4", "--sigma", "0,2"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!((r["supports"].as_u64(), r["on_subline"].as_u64()), (Some(340), Some(340)));

    let out = run(&["verify", "oracle-equivalence", "--p", "2", "--t", "2", "--sigma", "0,1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["oracle"], 5);

    let out = run(&["verify", "scroll-plucker", "--p", "2", "--t", "3", "--n", "3", "--sigma", "0,1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["points"], 73);
}

#[test]
fn verify_failure_exits_1() {
    // four points of a conic are dependent
    let out = run(&["verify", "general-position", "--k", "4", "--p", "5", "--t", "1", "--n", "3", "--sigma", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["pass"], false);
    assert!(r["counterexample"].is_array());
}
