use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn corpus(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file).display().to_string()
}

fn raycat(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_raycat")).args(args).env_remove("RAYCAT_THREADS").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = raycat(&all);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    if let Err(e) = validator.validate(&v) {
        panic!("{args:?}: {e}\n{v:#}");
    }
    assert_eq!(v["exit_code"], code);
    (code, v)
}

#[test]
fn classify_dumbbell_is_clean() {
    let (code, v) = json(&["classify", &corpus("dumbbell_3_3.rc")]);
    assert_eq!(code, 0);
    let cls = &v["result"][0]["classification"];
    assert_eq!((cls["verdict"].as_str(), cls["r"].as_u64(), cls["s"].as_u64()), (Some("DumbBell"), Some(3), Some(3)), "{cls:#}");
}

#[test]
fn loop_without_relations_is_not_finite() {
    let (code, v) = json(&["build", &corpus("nonadmissible_loop.rc")]);
    assert_eq!(code, 3);
    assert!(v["error"].as_str().unwrap().contains("length 32"));
}

#[test]
fn glued_penny_farthings_overlap() {
    let (code, v) = json(&["disjoint", &corpus("two_pf_glued.rc"), "--contours", "0", "1", "--k", "6"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["shared_points"], serde_json::json!(["x0"]));
}

#[test]
fn axiom_failure_is_a_finding() {
    assert_eq!(json(&["build", &corpus("kronecker.rc")]).0, 1);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(json(&["build", &corpus("missing.rc")]).0, 2);
    assert_eq!(json(&["classify", &corpus("diamond.rc"), "--contour", "0"]).0, 2);
    assert_eq!(json(&["disjoint", &corpus("two_db_apart.rc"), "--contours", "0", "1", "--k", "4"]).0, 2);
    let out = Command::new(env!("CARGO_BIN_EXE_raycat"))
        .args(["build", &corpus("diamond.rc")])
        .env("RAYCAT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let (code, v) = json(&["witness", &corpus("dumbbell_6_6.rc"), "--budget", "10"]);
    assert_eq!(code, 3);
    assert_eq!(v["result"]["outcome"], "absent_within_budget");
}

#[test]
fn witnesses_are_spelled_as_paths() {
    let (code, v) = json(&["crown", &corpus("square_crown.rc")]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["sigma"], serde_json::json!(["f", "h"]));
}

#[test]
fn every_subcommand_validates() {
    let runs: [&[&str]; 11] = [
        &["contours", &corpus("diamond.rc")],
        &["morph", &corpus("diamond.rc"), "--point", "z"],
        &["morph", &corpus("dumbbell_3_3.rc")],
        &["check-mild", &corpus("pennyfarthing_2_1.rc")],
        &["neighborhood", &corpus("diamond.rc"), "--contour", "1"],
        &["quotient", &corpus("dumbbell_3_3.rc"), "--kill", "r m"],
        &["split", &corpus("square_crown.rc"), "--point", "b"],
        &["sub", &corpus("diamond.rc"), "--points", "x,y"],
        &["decisive", &corpus("diamond.rc"), "--contour", "1"],
        &["separate", &corpus("pf_cycle_glued.rc")],
        &["witness", &corpus("dumbbell_3_3.rc")],
    ];
    for args in runs {
        let (code, _) = json(args);
        assert!(code <= 1, "{args:?} exited {code}");
    }
}

#[test]
fn cleave_checks_a_diagram_file() {
    let (_, v) = json(&["witness", &corpus("dumbbell_6_6.rc")]);
    let diagram = v["result"]["certificate"]["diagram"].clone();
    let path = std::env::temp_dir().join(format!("raycat-diagram-{}.json", std::process::id()));
    std::fs::write(&path, diagram.to_string()).unwrap();
    let (code, v) = json(&["cleave", &corpus("dumbbell_6_6.rc"), "--diagram", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ok"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["check-mild", &corpus("two_db_chained.rc"), "--format", "json"];
    assert_eq!(raycat(&args), raycat(&args));
}
