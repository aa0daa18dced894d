use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqrtlat")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn num(v: &Value) -> f64 {
    match v {
        Value::String(s) => s.parse().unwrap(),
        other => other.as_f64().unwrap(),
    }
}

fn scratch(tag: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn eval_at_own_integer_is_one() {
    let v = json(&["eval", "--n", "3", "--x", "3"]);
    assert!((num(&v["value"]) - 1.0).abs() < 1e-10, "{v}");
    assert_eq!(v["method"], "collocation");
}

#[test]
fn kloosterman_small_modulus() {
    let v = json(&["kloosterman", "--m", "-1", "--n", "1", "--c", "2"]);
    assert!((num(&v["value"]["re"]) - 1.0).abs() < 1e-12, "{v}");
    assert!((num(&v["value"]["im"]) + 1.0).abs() < 1e-12, "{v}");
}

#[test]
fn bad_arguments_exit_with_validation_code() {
    assert_eq!(run(&["eval", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["kloosterman", "--m", "1", "--n", "1", "--c", "0"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "--id", "nope"]).status.code(), Some(2));
}

#[test]
fn missed_tolerance_exits_with_tolerance_code() {
    let out = run(&["verify-interp", "--t", "4", "--xs", "0.3,1.1", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn histogram_figure_is_deterministic() {
    let dir = scratch("hist");
    let d = dir.to_str().unwrap();
    let v = json(&["figure", "--id", "histogram", "--nmax", "100", "--out-dir", d]);
    assert_eq!(v["rows"], 100);
    assert_eq!(v["rows"], v["declared_rows"]);
    // the values come before binning; the main csv holds the bins
    let values = PathBuf::from(v["extra"][0].as_str().unwrap());
    let csv = PathBuf::from(v["csv"].as_str().unwrap());
    let first = (std::fs::read(&values).unwrap(), std::fs::read(&csv).unwrap());
    assert_eq!(String::from_utf8_lossy(&first.0).lines().count(), 101);
    assert!(String::from_utf8_lossy(&first.1).starts_with("bin_lo,bin_hi,count"));
    json(&["figure", "--id", "histogram", "--nmax", "100", "--out-dir", d]);
    assert_eq!((std::fs::read(&values).unwrap(), std::fs::read(&csv).unwrap()), first);
    std::fs::remove_dir_all(&dir).ok();
}
