use std::process::{Command, Output};

use serde_json::Value;

fn hyperpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperpf")).args(args).env_remove("HYPERPF_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn compute_beta_four() {
    let out = hyperpf(&["compute", "--beta", "4", "--n", "2", "--weight", "gaussian"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert!((v["value"]["re"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!(v["oracles"]["mehta"]["rel_err"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["case"], "case1");
    assert_eq!(v["L"], 2);
    assert_eq!(v["geometry"], "line");
}

#[test]
fn compute_beta_nine() {
    let out = hyperpf(&["compute", "--beta", "9", "--n", "2", "--weight", "gaussian"]);
    assert!(out.status.success());
    let re = json(&out)["value"]["re"].as_f64().unwrap();
    assert!((re - 3466.3808).abs() < 1e-3, "{re}");
}

#[test]
fn invalid_beta_exits_two() {
    let out = hyperpf(&["compute", "--beta", "3", "--n", "2", "--weight", "gaussian"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("beta must be L^2 or L^2+1"));
    assert!(out.stdout.is_empty());
}

#[test]
fn other_spec_errors_exit_two() {
    for args in [
        &["compute", "--beta", "2", "--n", "3"][..],
        &["compute", "--beta", "1", "--n", "2", "--geometry", "circle", "--weight", "gaussian"],
        &["compute", "--beta", "1", "--n", "2", "--weight", "jacobi", "--a", "-1"],
        &["compute", "--beta", "1", "--n", "2", "--weight", "uniform", "--lo", "2", "--hi", "-1"],
        &["compute", "--beta", "1", "--n", "2", "--family", "chebyshev"],
        &["compute", "--beta", "1", "--n", "2", "--oracle", "some"],
        &["compute", "--beta", "1"],
        &["compute", "--beta", "1", "--n", "2", "--threads", "0"],
        &["compute", "--beta", "16", "--n", "8"],
    ] {
        let out = hyperpf(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn tolerance_breach_exits_three() {
    let out = hyperpf(&["compute", "--beta", "9", "--n", "3", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("disagreement"));
    // the result is still printed
    assert!(json(&out)["value"]["re"].as_f64().unwrap() > 0.0);
}

#[test]
fn circle_and_other_weights() {
    let out = hyperpf(&["compute", "--beta", "4", "--n", "3", "--geometry", "circle"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["geometry"], "circle");
    assert!(v["oracles"]["dyson"]["rel_err"].as_f64().unwrap() < 1e-10);

    let out = hyperpf(&["compute", "--beta", "4", "--n", "2", "--weight", "jacobi", "--a", "2", "--b", "1.5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(json(&out)["oracles"]["selberg"]["rel_err"].as_f64().unwrap() < 1e-10);

    let out = hyperpf(&["compute", "--beta", "1", "--n", "3", "--weight", "uniform", "--lo", "-1", "--hi", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(json(&out)["oracles"]["selberg"]["rel_err"].as_f64().unwrap() < 1e-10);
}

#[test]
fn families_agree() {
    let values: Vec<f64> = ["monomial", "hermite", "legendre", "random"]
        .iter()
        .map(|f| {
            let out = hyperpf(&["compute", "--beta", "9", "--n", "3", "--family", f, "--seed", "5", "--oracle", "none"]);
            assert!(out.status.success());
            let v = json(&out);
            assert!(v["oracles"].as_object().unwrap().is_empty());
            v["value"]["re"].as_f64().unwrap()
        })
        .collect();
    for v in &values {
        assert!((v - values[0]).abs() <= 1e-8 * values[0]);
    }
}

fn without_seconds(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("seconds");
    v
}

#[test]
fn identical_runs_match() {
    let args = ["compute", "--beta", "1", "--n", "3", "--oracle", "all", "--seed", "9"];
    let a = without_seconds(json(&hyperpf(&args)));
    let b = without_seconds(json(&hyperpf(&args)));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 9);
    let mc = &a["oracles"]["monte_carlo"];
    let se = mc["error_estimate"].as_f64().unwrap();
    assert!((mc["value"].as_f64().unwrap() - a["value"]["re"].as_f64().unwrap()).abs() < 4.0 * se);
}

#[test]
fn threads_flag_and_env() {
    let out = hyperpf(&["--threads", "2", "compute", "--beta", "4", "--n", "3"]);
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_hyperpf"))
        .args(["compute", "--beta", "4", "--n", "3"])
        .env("HYPERPF_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_hyperpf"))
        .args(["compute", "--beta", "4", "--n", "3"])
        .env("HYPERPF_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"beta": 1, "n": 2, "weight": "jacobi", "a": 1, "b": 1, "tol": 1e-6}"#).unwrap();
    let p = path.to_str().unwrap();
    let out = hyperpf(&["compute", "--config", p]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["beta"], 1);
    assert_eq!(v["weight"], "jacobi");
    let out = hyperpf(&["compute", "--config", p, "--beta", "4"]);
    assert_eq!(json(&out)["beta"], 4);

    std::fs::write(&path, r#"{"beta": 1, "n": 2, "atoms": [{"x": 0.5, "c": 2}]}"#).unwrap();
    let out = hyperpf(&["compute", "--config", p]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(json(&out)["value"]["re"].as_f64().unwrap() > 1.0 / std::f64::consts::PI.sqrt());

    std::fs::write(&path, r#"{"beta": 1, "colour": "red"}"#).unwrap();
    assert_eq!(hyperpf(&["compute", "--config", p]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    for suite in ["identities", "invariance"] {
        let out = hyperpf(&["verify", "--suite", suite]);
        assert!(out.status.success(), "{suite}: {}", stderr(&out));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("suite,check,lhs,rhs,rel_err,pass\n"));
        let rows = csv_rows(&text);
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r[0] == suite && r[5] == "true"));
    }
    let out = hyperpf(&["verify", "--suite", "invariance"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("beta=9 N=4"));
}

#[test]
fn verify_all_passes() {
    let out = hyperpf(&["verify", "--suite", "all", "--tol", "1e-6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for suite in ["exterior", "identities", "mehta", "selberg", "dyson", "invariance"] {
        assert!(rows.iter().any(|r| r[0] == suite), "{suite} missing");
    }
}

#[test]
fn verify_unknown_suite() {
    assert_eq!(hyperpf(&["verify", "--suite", "everything"]).status.code(), Some(2));
}

#[test]
fn sweep_beta_one() {
    let out = hyperpf(&["sweep", "--beta", "1", "--n-range", "1..5", "--weight", "gaussian"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("beta,L,N,case,value_re,value_im,oracle,oracle_value,rel_err,seconds\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[2], (i + 1).to_string());
        assert_eq!(r[6], "mehta");
        assert!(r[8].parse::<f64>().unwrap() < 1e-6);
    }
}

#[test]
fn sweep_beta_four_increases() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = hyperpf(&["sweep", "--beta", "4", "--n-range", "1..4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    let values: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(values.len(), 4);
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn sweep_empty_range() {
    let out = hyperpf(&["sweep", "--beta", "4", "--n-range", "3..2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "beta,L,N,case,value_re,value_im,oracle,oracle_value,rel_err,seconds\n");
}

#[test]
fn sweep_failure_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.csv");
    // beta = 2 needs N even, so N = 3 fails after N = 2 is written
    let out = hyperpf(&["sweep", "--beta", "2", "--n-range", "2..4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "2");
    assert_eq!(hyperpf(&["sweep", "--beta", "1", "--n-range", "1-3"]).status.code(), Some(2));
}
