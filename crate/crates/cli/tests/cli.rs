use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use duality::engine::{verify_record, CertificateRecord};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_duality"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn eval_lp_round_trips() {
    let o = bin().args(["eval", "--space", "lp", "--p", "3", "--vector", "1,-2,0.5"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let j: Vec<f64> = serde_json::from_value(v["j"].clone()).unwrap();
    // J* on l_{3/2} maps back to x.
    let q = 1.5;
    let n: f64 = j.iter().map(|c: &f64| c.abs().powf(q)).sum::<f64>().powf(1.0 / q);
    let back: Vec<f64> = j.iter().map(|c| n * c.signum() * (c.abs() / n).powf(q - 1.0)).collect();
    for (b, x) in back.iter().zip([1.0, -2.0, 0.5]) {
        assert!((b - x).abs() < 1e-12, "{back:?}");
    }
}

#[test]
fn eval_l1_and_c01() {
    let o = bin().args(["eval", "--space", "l1", "--values", "2,0,-1"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["singleton"], Value::Bool(false));
    assert_eq!(v["canonical"], serde_json::json!([3.0, 0.0, -3.0]));

    let o = bin().args(["eval", "--space", "c01", "--f", "tent:0.5,2"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["maximizing_set"]["atoms"], serde_json::json!([0.5]));
    assert_eq!(v["canonical"]["atoms"], serde_json::json!([[0.5, 2.0]]));
}

#[test]
fn eval_rejects_malformed_input() {
    for args in [
        vec!["eval", "--space", "lp", "--p", "1", "--vector", "1"],
        vec!["eval", "--space", "lp", "--p", "2", "--vector", "1,x"],
        vec!["eval", "--space", "lp", "--vector", "1"],
        vec!["eval", "--space", "l1", "--weights", "1,-1", "--values", "1,1"],
        vec!["eval", "--space", "c01", "--f", "{\"breakpoints\":[0.2,1],\"values\":[1,1]}"],
        vec!["eval", "--space", "hilbert"],
    ] {
        let o = bin().args(&args).output().unwrap();
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn run_fixture_writes_verified_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("certs.json");
    let o = bin().arg("run").arg(fixture("all.json")).arg("--out").arg(&out).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let records: Vec<CertificateRecord> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(records.len(), 14);
    for r in &records {
        verify_record(r).unwrap();
    }
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(table.contains("cor57") && table.contains("Certified"));
}

#[test]
fn run_empty_list_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "empty.json", r#"{"scenarios": []}"#);
    let o = bin().arg("run").arg(&f).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("empty.certificates.json").exists());
}

#[test]
fn run_reports_hypothesis_failures() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "c1.json",
        r#"{"scenarios": [{"space": {"space": "c01"}, "theorem": "thm58",
            "params": {"f": {"breakpoints": [0, 1], "values": [1, 1]}, "c": 1.0}}]}"#,
    );
    let o = bin().arg("run").arg(&f).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis violated: c ≠ 1"));
}

#[test]
fn run_rejects_unknown_theorem_and_bad_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "u.json",
        r#"{"scenarios": [{"space": {"space": "lp", "p": 2}, "theorem": "thm99", "params": {}}]}"#,
    );
    assert_eq!(code(&bin().arg("run").arg(&f).output().unwrap()), 2);
    let g = write(dir.path(), "bad.json", "{not json");
    assert_eq!(code(&bin().arg("run").arg(&g).output().unwrap()), 2);
    assert_eq!(code(&bin().arg("run").arg(dir.path().join("missing.json")).output().unwrap()), 2);
}

#[test]
fn run_exits_one_when_not_certified() {
    let dir = tempfile::tempdir().unwrap();
    // A settle tolerance of zero cannot be met by a converging curve.
    let f = write(
        dir.path(),
        "strict.json",
        r#"{"scenarios": [{"space": {"space": "lp", "p": 3}, "theorem": "thm33",
            "params": {"x": [1.0, -2.0], "a": 3.0},
            "tolerances": {"settle_tol": 0.0, "cert_tol": 1e-6, "membership_tol": 1e-9}}]}"#,
    );
    let o = bin().arg("run").arg(&f).output().unwrap();
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = bin()
        .args(["suite", "--space", "l1", "--weights", "1,0.5,2", "--samples", "30", "--seed", "3", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["seed"], serde_json::json!(3));
}
