use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn cli() -> Command {
    let mut c = Command::cargo_bin("twistedconj").unwrap();
    c.env_remove("TWISTEDCONJ_GOLDEN_DIR");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = cli().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/golden")
}

#[test]
fn makelist_md_has_24_rows() {
    let (code, out, _) = run(&["makelist", "--k", "0,0,0,1", "--format", "md"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("| [[")).count(), 24);
    assert!(out.starts_with("| M | d | R |"));
}

#[test]
fn makelist_reduces_mod_2() {
    let a = run(&["makelist", "--k", "2,4,6,3"]);
    let b = run(&["makelist", "--k", "0,0,0,1"]);
    assert_eq!(a.1, b.1);
    let c = run(&["makelist", "--k", "-2,4,-6,-1"]);
    assert_eq!(c.1, b.1);
}

#[test]
fn makelist_swaps_omitted_keys() {
    let v = json(&["makelist", "--k", "0,1,0,0"]);
    assert_eq!(v["swapped"], Value::Bool(true));
    assert_eq!(v["table_key"], serde_json::json!([0, 0, 1, 0]));
    let w = json(&["makelist", "--k", "0,0,1,0"]);
    assert_eq!(v["rows"], w["rows"]);
    let (_, md, _) = run(&["makelist", "--k", "0,1,0,0", "--format", "md"]);
    assert!(md.contains("(-k1,k3,k2,k4)"));
}

#[test]
fn makelist_csv() {
    let (code, out, _) = run(&["makelist", "--k", "1,1,1,1", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("M,d,S,R"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn verify_all_passes() {
    let v = json(&["verify", "--all"]);
    assert_eq!(v["ok"], Value::Bool(true));
    assert_eq!(v["tables"].as_array().unwrap().len(), 12);
    assert_eq!(v["witnesses"]["rows_checked"], 12);
}

#[test]
fn verify_parallel_is_deterministic() {
    let a = run(&["verify", "--tables", "--parallel", "4"]);
    let b = run(&["verify", "--tables"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn verify_reads_golden_dir() {
    let dir = golden_dir();
    let out = cli().args(["verify", "--all"]).env("TWISTEDCONJ_GOLDEN_DIR", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_reports_corrupted_row() {
    let tmp = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(golden_dir()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, tmp.path().join(p.file_name().unwrap())).unwrap();
    }
    let target = tmp.path().join("makelist_0000.json");
    let text = std::fs::read_to_string(&target).unwrap();
    let first = r#""R":{"step":4,"offset":4}"#;
    assert!(text.contains(first));
    std::fs::write(&target, text.replacen(first, r#""R":{"step":8,"offset":4}"#, 1)).unwrap();
    let (code, out, _) = run(&["verify", "--tables", "--golden-dir", tmp.path().to_str().unwrap(), "--format", "md"]);
    assert_eq!(code, 1);
    assert!(out.contains("0000: stored row not produced: M=[[0,1],[1,0]] d=(0,0) R=8ℕ+4"), "{out}");
    assert!(out.contains("| table 0000 | 24 | 24 | DIFF |"));
}

#[test]
fn verify_reports_unreadable_file() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&["verify", "--tables", "--golden-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("makelist_0000.json"));
}

#[test]
fn rnumber_closed_form() {
    let v = json(&["rnumber", "--family", "d3f2", "--k", "0,0,0,1", "--M", "0,1,1,3", "--d", "0,0"]);
    assert_eq!(v["R"], 6);
    assert_eq!(v["method"], "closed-form");
    assert_eq!(v["conditions"]["d"], Value::Bool(true));
}

#[test]
fn rnumber_averaging() {
    let v = json(&["rnumber", "--family", "d4f5", "--phi-m", "2"]);
    assert_eq!(v["R"], 16);
    assert_eq!(v["method"], "averaging");
    let v = json(&["rnumber", "--family", "d4f3", "--k", "2", "--M", "0,1,1,3", "--d", "1,-1", "--extra", "5"]);
    assert_eq!(v["R"], 12);
}

#[test]
fn rnumber_infinite() {
    let v = json(&["rnumber", "--family", "d3f2", "--k", "0,0,0,1", "--M", "1,0,0,-1", "--d", "0,0"]);
    assert_eq!(v["R"], "infinity");
}

#[test]
fn rnumber_condition_failure() {
    let (code, _, err) = run(&["rnumber", "--family", "d3f2", "--k", "0,0,0,1", "--M", "1,0,0,1", "--d", "0,0"]);
    assert_eq!(code, 1);
    assert!(err.contains("condition (d)"), "{err}");
    let (code, _, err) = run(&["rnumber", "--family", "d3f2", "--k", "1,0,0,0", "--M", "0,1,1,0", "--d", "0,1"]);
    assert_eq!(code, 1);
    assert!(err.contains("condition (b)"), "{err}");
}

#[test]
fn spectrum_output() {
    let v = json(&["spectrum", "--family", "d3f2", "--k", "1,1,1,1"]);
    assert_eq!(v, serde_json::json!({"progressions": [{"step": 4, "offset": -2}], "infinity": true}));
    let v = json(&["spectrum", "--family", "d3f1"]);
    assert_eq!(v, serde_json::json!({"progressions": [{"step": 2, "offset": 0}], "infinity": true}));
    let v = json(&["spectrum", "--family", "d4f143"]);
    assert_eq!(v["progressions"], serde_json::json!([]));
}

#[test]
fn rinfty_sampling() {
    let v = json(&["rinfty", "--family", "d4f143", "--sample", "500", "--seed", "7"]);
    assert_eq!(v["valid"], 500);
    assert_eq!(v["counterexamples"], serde_json::json!([]));
}

#[test]
fn rinfty_families_345_have_finite_r() {
    let v = json(&["rinfty", "--family", "d4f4", "--k", "3,0,2,1"]);
    assert_eq!(v["rinfty"], Value::Bool(false));
}

#[test]
fn oracle_saturates() {
    let v = json(&["oracle", "--family", "d3f2", "--k", "0,0,0,1", "--M", "0,1,1,1", "--d", "0,0", "--max-order", "2000"]);
    assert_eq!(v["saturated"], Value::Bool(true));
    assert_eq!(v["closed_form"], 2);
    assert_eq!(v["quotient"]["boxed"]["count"], 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["rinfty", "--family", "d4f2", "--sample", "30", "--seed", "3", "--format", "csv"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 9] = [
        &["makelist", "--k", "0,x,0,1"],
        &["makelist", "--k", "0,0,1"],
        &["verify", "--parallel", "many"],
        &["rnumber", "--family", "d9"],
        &["rnumber", "--family", "d3f2", "--k", "0,0,0,1", "--M", "0,1,1", "--d", "0,0"],
        &["spectrum", "--family", "nope"],
        &["rinfty", "--family", "d4f2", "--sample", "-3"],
        &["oracle", "--family", "d3f2", "--k", "0,0,0,1", "--M", "0,1,1,1"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}

#[test]
fn help_shows_the_matrix_layout() {
    let (code, out, _) = run(&["rnumber", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("--M m1,m3,m2,m4"));
}
