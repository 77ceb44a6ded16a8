use std::process::{Command, Output};

use serde_json::Value;

fn ladder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ladder")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = ladder(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (code, v)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn check_algebra_closes() {
    let (code, v) = json(&["check-algebra", "--alpha", "1", "--beta", "1", "--sigma", "1", "--window", "0:16"]);
    assert_eq!(code, 0);
    assert!(num(&v["residual"]) <= 1e-12);
    assert_eq!(v["status"], "ok");
}

#[test]
fn check_algebra_rejects_negative_lambda_sq() {
    let out = ladder(&["check-algebra", "--alpha", "1", "--beta", "-2", "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-unitary"));
}

#[test]
fn check_algebra_phase_impulse() {
    let (code, v) = json(&["check-algebra", "--profile", "phase", "--window", "0:10"]);
    assert_eq!(code, 0);
    assert_eq!(v["s-unit-impulse"], true);
    assert_eq!(v["rows"][0]["s"], 1.0);
    assert_eq!(v["rows"][1]["s"], 0.0);
}

#[test]
fn factorize_u1() {
    let (code, v) = json(&["factorize", "--alpha", "1", "--beta", "1", "--sigma", "1", "--y", "0.3"]);
    assert_eq!(code, 0);
    assert!(num(&v["residual-normal"]) <= 1e-10);
    assert!(num(&v["residual-anti-normal"]) <= 1e-10);
    assert!(num(&v["pad-certificate"]) <= 1e-12);
}

#[test]
fn factorize_u2_reduction_flag() {
    let (code, v) = json(&[
        "factorize", "--alpha", "1", "--beta", "0.5", "--sigma", "1", "--a", "0.4i", "--b", "0.4i", "--c", "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["reduces-to-U1"], true);
    assert!(num(&v["reduction-deviation"]) <= 1e-12);

    let (_, v) = json(&[
        "factorize", "--alpha", "1", "--beta", "0.5", "--sigma", "1", "--a", "0.2,0.3", "--b", "-0.2,0.3", "--c", "0.1i",
    ]);
    assert_eq!(v["reduces-to-U1"], false);
    assert!(num(&v["residual-normal"]) <= 1e-10);
}

#[test]
fn factorize_pole_is_a_domain_error() {
    let y = format!("{}", std::f64::consts::FRAC_PI_2 / 0.5f64.sqrt());
    let out = ladder(&["factorize", "--alpha", "6", "--beta", "-7", "--sigma", "-0.5", "--y", &y, "--core", "-5:6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn gn_routes_agree() {
    let (code, v) = json(&["gn", "--alpha", "1", "--beta", "2", "--sigma", "1", "--n", "3", "--y", "0.1,0.3,0.5", "--recursion"]);
    assert_eq!(code, 0);
    assert!(num(&v["max-route-deviation"]) <= 1e-9);
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    assert_eq!(v["rows"][0]["route"], "closed-form");
}

#[test]
fn triangle_csv_golden() {
    let out = ladder(&["triangle", "--rule", "tilde:1", "--rows", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let want = "\
row,column,num,den
0,0,1,1
1,1,1,1
2,0,1,1
2,2,2,1
3,1,5,1
3,3,6,1
4,0,5,1
4,2,28,1
4,4,24,1
";
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn triangle_ascii_golden() {
    let out = ladder(&["triangle", "--rule", "unit", "--boundary", "diamond", "--rows", "4", "--format", "ascii"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let want = [
        "    n | -3 -2 -1  0  1  2  3",
        "    0 |           1         ",
        "    1 |        1     1      ",
        "    2 |     1     2     1   ",
        "    3 |  1     3     3     1",
    ]
    .join("\n");
    assert!(text.starts_with(&want), "{text}");
}

#[test]
fn triangle_rationals_are_strings() {
    let (code, v) = json(&["triangle", "--rule", "bar:1/2", "--rows", "3", "--column", "0"]);
    assert_eq!(code, 0);
    // T(1,1) = w_right(0) = 1/2
    let node = v["rows"].as_array().unwrap().iter().find(|r| r["row"] == 1).unwrap();
    assert_eq!(node["num"], "1");
    assert_eq!(node["den"], "2");
    assert_eq!(v["column-series"][1]["coefficient"], serde_json::json!({"num": "-1", "den": "4"}));
}

#[test]
fn rotate_reports_agreement() {
    let (code, v) = json(&["rotate", "--omega", "0.9", "--theta", "0.6", "--phi", "0.4", "--j", "3/2"]);
    assert_eq!(code, 0);
    for (_, d) in v["deviations"].as_object().unwrap() {
        assert!(num(d) <= 1e-11);
    }
    assert_eq!(v["rows"].as_array().unwrap().len(), 3 * 16);
}

#[test]
fn rotate_singular_parametrization() {
    let pi2 = format!("{}", std::f64::consts::FRAC_PI_2);
    let out = ladder(&["rotate", "--omega", &pi2, "--theta", &pi2, "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let (code, _) = json(&["rotate", "--omega", &pi2, "--theta", &pi2, "--j", "1", "--method", "direct"]);
    assert_eq!(code, 0);
}

#[test]
fn phase_matches_oracle() {
    let (code, v) = json(&["phase", "--n", "4", "--m", "2", "--y", "0:1:5"]);
    assert_eq!(code, 0);
    assert!(num(&v["max-deviation"]) <= 1e-10);
    assert_eq!(v["commutator-unit-impulse"], true);
}

#[test]
fn sumrule_tolerance_violation_exits_one() {
    let (code, v) = json(&["sumrule", "--y", "0.4,0.8"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    let (code, v) = json(&["sumrule", "--name", "bessel-sin", "--y", "0.8", "--k-max", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "tolerance-violation");
}

#[test]
fn config_errors_exit_three() {
    assert_eq!(ladder(&["gn", "--n", "1", "--y", "0.1"]).status.code(), Some(3));
    assert_eq!(ladder(&["gn", "--bogus"]).status.code(), Some(3));
    assert_eq!(ladder(&["sumrule", "--name", "nope", "--y", "0.1"]).status.code(), Some(3));
    assert_eq!(ladder(&["--config", "/nonexistent.json", "gn"]).status.code(), Some(3));
    assert_eq!(ladder(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_override() {
    let dir = std::env::temp_dir().join(format!("ladder-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(&path, r#"{"command": "gn", "alpha": 1, "beta": 1, "sigma": 1, "n": 1, "y": [0.2, 0.4], "route": "closed"}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["--config", p]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0]["route"], "closed-form");
    let (_, v) = json(&["gn", "--config", p, "--route", "oracle", "--n", "2"]);
    assert_eq!(v["rows"][0]["route"], "oracle");
    assert_eq!(v["n"], 2);

    let out_path = dir.join("out.csv");
    let out = ladder(&["sumrule", "--y", "0.5", "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&out_path).unwrap().starts_with("rule,y,residual\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["gn", "--alpha", "1", "--beta", "0.5", "--sigma", "1", "--n", "2", "--y", "0:0.8:17", "--format", "csv"];
    let a = ladder(&args).stdout;
    let b = ladder(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
