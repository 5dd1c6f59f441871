use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tandeg::report::{parse_curve, parse_report, CurveInput, Verdict};

fn tandeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tandeg")).args(args).output().expect("run tandeg")
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn assert_valid(schema_name: &str, file: &Path) {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    let s = schema(schema_name);
    let msgs: Vec<String> = match s.validate(&v) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{} does not match {schema_name}: {msgs:?}", file.display());
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path_str(&out)]);
    let r = tandeg(&all);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    out
}

#[test]
fn construct_theorem1_prints_path_and_degree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let r = tandeg(&["construct", "theorem1", "--p", "3", "--q", "3", "--n", "1", "-o", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0));
    let stdout = String::from_utf8(r.stdout).unwrap();
    assert!(stdout.contains(path_str(&out)));
    assert!(stdout.contains("degree 10"));
    assert_valid("curve.schema.json", &out);
}

#[test]
fn construct_rejects_bad_parameters() {
    let r = tandeg(&["construct", "theorem1", "--p", "5", "--q", "5", "--n", "1"]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8(r.stderr).unwrap();
    assert!(err.contains("does not divide"), "{err}");
    let r = tandeg(&["construct", "esteves-homma", "--p", "2"]);
    assert_eq!(r.status.code(), Some(2));
    let r = tandeg(&["construct", "as-main", "--p", "3", "--q", "3", "--g", "0,0,1", "--alpha", "0"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn round_trip_reproduces_curve() {
    let dir = tempfile::tempdir().unwrap();
    let want = tandeg::constructors::esteves_homma(7).unwrap();
    let out = construct(dir.path(), "eh.json", &["esteves-homma", "--p", "7"]);
    assert_valid("curve.schema.json", &out);
    let back = parse_curve(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(back, CurveInput::Param(want));
}

#[test]
fn verify_theorem1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let c = construct(dir.path(), "c.json", &["theorem1", "--p", "3", "--q", "3", "--n", "1"]);
    let rep = dir.path().join("r.json");
    let r = tandeg(&["verify", "-i", path_str(&c), "-o", path_str(&rep)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_valid("report.schema.json", &rep);
    let report = parse_report(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    let tan = report.checks.iter().find(|c| c.name == "tangency_symbolic").unwrap();
    assert_eq!(tan.witness["generic_count"], 1);
    for c in report.checks.iter().filter(|c| c.leg == Some(tandeg::gauss::Leg::Sampled)) {
        assert!(c.seed.is_some(), "{} has no seed", c.name);
    }
}

#[test]
fn verify_twisted_cubic_nonclassical_fails() {
    let dir = tempfile::tempdir().unwrap();
    let c = construct(
        dir.path(),
        "cubic.json",
        &["affine", "--p", "5", "--coord", "1", "--coord", "0,1", "--coord", "0,0,1", "--coord", "0,0,0,1"],
    );
    let rep = dir.path().join("r.json");
    let r = tandeg(&["verify", "-i", path_str(&c), "--checks", "nonclassical", "-o", path_str(&rep)]);
    assert_eq!(r.status.code(), Some(1));
    assert_valid("report.schema.json", &rep);
}

#[test]
fn verify_malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"kind\": \"param_curve\"").unwrap();
    assert_eq!(tandeg(&["verify", "-i", path_str(&bad)]).status.code(), Some(3));
    std::fs::write(&bad, "{\"kind\": \"param_curve\", \"p\": 4}").unwrap();
    assert_eq!(tandeg(&["verify", "-i", path_str(&bad)]).status.code(), Some(3));
    let missing = dir.path().join("missing.json");
    assert_eq!(tandeg(&["verify", "-i", path_str(&missing)]).status.code(), Some(3));
    let c = construct(dir.path(), "c.json", &["theorem1", "--p", "3", "--q", "3", "--n", "1"]);
    let r = tandeg(&["verify", "-i", path_str(&c), "--checks", "no_such_check"]);
    assert_eq!(r.status.code(), Some(3));
}

fn strip_timings(v: &mut Value) {
    for c in v["checks"].as_array_mut().unwrap() {
        c["elapsed_ms"] = Value::from(0);
    }
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let c = construct(dir.path(), "c.json", &["theorem1", "--p", "3", "--q", "3", "--n", "2"]);
    let run = |name: &str| {
        let rep = dir.path().join(name);
        let r = tandeg(&["verify", "-i", path_str(&c), "--seed", "17", "-o", path_str(&rep)]);
        assert_eq!(r.status.code(), Some(0));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
        strip_timings(&mut v);
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn verify_artin_schreier() {
    let dir = tempfile::tempdir().unwrap();
    let c = construct(
        dir.path(),
        "as.json",
        &["as-main", "--p", "3", "--q", "3", "--g", "0,0,1", "--alpha", "1", "--N", "3"],
    );
    assert_valid("curve.schema.json", &c);
    let rep = dir.path().join("r.json");
    let r = tandeg(&["verify", "-i", path_str(&c), "-o", path_str(&rep)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_valid("report.schema.json", &rep);
}

#[test]
fn sweep_rows_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let json = dir.path().join("s.json");
    let r = tandeg(&["sweep", "--p", "3,5", "--n", "1-2", "--csv", path_str(&csv), "--json", path_str(&json)]);
    assert_eq!(r.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("3,3,1,10,1,"));
    assert!(lines[2].starts_with("3,3,2,82,1,"));
    assert!(lines[3].starts_with("5,5,2,626,3,"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);

    // p = 2 and composite p give no valid triples.
    let r = tandeg(&["sweep", "--p", "2,4", "--n", "1"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(String::from_utf8(r.stdout).unwrap().lines().count(), 1);
}

#[test]
fn thread_cap_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let c = construct(dir.path(), "c.json", &["theorem1", "--p", "3", "--q", "3", "--n", "1"]);
    let r = Command::new(env!("CARGO_BIN_EXE_tandeg"))
        .env("TANDEG_THREADS", "1")
        .args(["verify", "-i", path_str(&c)])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0));
}
