use std::path::PathBuf;

use elemdoc::cli::{run_args, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    let mut v = vec!["elemdoc".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run_args(v)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let out = run(&a);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["exit_code"], out.code);
    (out.code, v)
}

#[test]
fn check_theory_accepts_corpus() {
    let out = run(&["check-theory", &fixture("monoid.thy")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("3 axioms"));
}

#[test]
fn check_model_reports_violation() {
    let ok = run(&["check-model", &fixture("s3.mod"), &fixture("group.thy")]);
    assert_eq!(ok.code, 0);
    let bad = run(&["check-model", &fixture("s3.mod"), &fixture("abelian-group.thy")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("comm"));
}

#[test]
fn check_morphism_proves_translated_axioms() {
    let (code, v) = json(&["check-morphism", &fixture("abelianize.mor")]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "check-morphism");
}

#[test]
fn free_group_on_idempotent_is_trivial() {
    let (code, v) = json(&["free", &fixture("monoid-to-group.mor"), &fixture("idempotent.mod")]);
    assert_eq!(code, 0);
    assert_eq!(v["output"]["carriers"][0]["size"], 1);
}

#[test]
fn free_reports_truncation() {
    let out = run(&["--max-atoms", "20", "free", &fixture("abelianize.mor"), &fixture("s3.mod"), "--depth", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("truncated"));
}

#[test]
fn free_result_verifies_and_tampering_is_caught() {
    let (code, v) = json(&["free", &fixture("pointed-extension.mor"), &fixture("set2.mod")]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("elemdoc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["verify-universal", good.to_str().unwrap(), "--bound", "2"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);

    let mut t = v.clone();
    t["output"]["carriers"][0]["size"] = Value::from(4);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&t).unwrap()).unwrap();
    let out = run(&["verify-universal", bad.to_str().unwrap(), "--bound", "2"]);
    assert_eq!(out.code, 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ell_is_unstable_at_small_bound() {
    let (code, v) = json(&["ell", &fixture("pointed-extension.mor"), &fixture("set2.mod"), "--ctx", "1", "--bound", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["stable"], false);
    let (code, v) = json(&["ell", &fixture("pointed-extension.mor"), &fixture("set2.mod"), "--ctx", "1", "--bound", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["stable"], true);
}

#[test]
fn qcomplete_and_kan_pass() {
    assert_eq!(run(&["qcomplete", "--max-size", "2"]).code, 0);
    for f in ["pointed", "coproduct", "arrow"] {
        let out = run(&["kan", "--fixture", f]);
        assert_eq!(out.code, 0, "{f}: {}", out.stdout);
    }
    assert_eq!(run(&["kan", "--fixture", "nope"]).code, 1);
}

#[test]
fn hard_errors_exit_one() {
    let out = run(&["check-theory", "missing.thy"]);
    assert_eq!(out.code, 1);
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["ell", &fixture("pointed-extension.mor"), &fixture("set2.mod"), "--bound", "0"]).code, 1);
}

#[test]
fn parse_errors_carry_location() {
    let dir = std::env::temp_dir().join(format!("elemdoc-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.thy");
    std::fs::write(&p, "sort elem\nop e : -> elem\nax u: [x1:elem] *(e, x1) = x1\n").unwrap();
    let out = run(&["check-theory", p.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("bad.thy:3:"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("elemdoc-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("r.json");
    let out = run(&["--format", "json", "--out", p.to_str().unwrap(), "check-theory", &fixture("group.thy")]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    std::fs::remove_dir_all(&dir).ok();
}
