use std::process::Command;

use serde_json::Value;
use tautlab_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tautlab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = invoke(args);
    (code, serde_json::from_str(&out).unwrap())
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn family_example_passes() {
    let (code, v) = json(&[
        "verify",
        "family",
        "--nu",
        "0.3",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "verify family");
    assert_eq!(v["seed"], 7);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        ["tautness", "contact spread", "lambda constancy", "flatness"]
    );
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], true);
        assert!(c["max_residual"].as_f64().unwrap() < c["tolerance"].as_f64().unwrap());
        assert_eq!(c["skipped"], 0);
        assert!(c["points_sampled"].as_u64().unwrap() > 0);
    }
}

#[test]
fn helmholtz_example_passes() {
    let (code, v) = json(&["verify", "helmholtz", "--grid", "6x5"]);
    assert_eq!(code, EXIT_PASS);
    let ma = &v["checks"][0];
    assert_eq!(ma["name"], "MA2");
    assert_eq!(ma["points_sampled"], 30);
}

#[test]
fn json_is_deterministic() {
    let args = ["verify", "cartan", "--samples", "12", "--seed", "99"];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(
        serde_json::to_string(&without_wall_time(a)).unwrap(),
        serde_json::to_string(&without_wall_time(b)).unwrap()
    );
}

#[test]
fn moduli_reports() {
    let (code, v) = json(&["report", "moduli", "--delta", "0.3+0.0i"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["moduli"]["extends_to_sphere"], false);
    assert!(v["moduli"]["candidate_residual"].as_f64().unwrap() > 1e-2);
    let (code, v) = json(&["report", "moduli", "--delta", "-0.4i", "--samples", "10"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["moduli"]["extends_to_sphere"], true);
    assert_eq!(v["moduli"]["canonical"], serde_json::json!([0.0, 0.4]));
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn failing_checks_exit_one() {
    let (code, v) = json(&["verify", "gh", "--samples", "5", "--tol", "1e-300"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["pass"] == false));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "bogus"][..],
        &["verify", "family", "--nu"],
        &["verify", "helmholtz", "--grid", "0x3"],
        &["verify", "gh", "--json", "--csv"],
        &["verify", "gh", "--tol", "-1"],
        &["report", "moduli", "--delta", "0.7"],
        &["report", "moduli"],
        &[],
    ] {
        let (code, out, err) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("verify"));
}

#[test]
fn csv_rows() {
    let (code, out, _) = invoke(&["curvature", "gauss", "--grid", "3x2", "--csv"]);
    assert_eq!(code, EXIT_PASS);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "check,x0,x1,x2,x3,residual");
    assert_eq!(lines.len(), 7);
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[0], "gauss curvature");
        assert!(cells[3].is_empty() && cells[4].is_empty());
        assert!(cells[5].parse::<f64>().unwrap().abs() < 1e-8);
    }
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("tautlab-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = invoke(&["curvature", "kahler", "--grid", "3x3", "--out", p]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["suite"], "curvature kahler");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tautlab");
    let ok = Command::new(bin)
        .args(["curvature", "gauss", "--grid", "2x2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    let bad = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let fail = Command::new(bin)
        .args(["verify", "gh", "--samples", "5", "--tol", "1e-300"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(EXIT_FAIL));
}
