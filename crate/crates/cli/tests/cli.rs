use serde_json::Value;
use std::process::{Command, Output};

fn elabsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elabsub")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = elabsub(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn verify_passes_on_small_groups() {
    for q in ["3", "5", "7"] {
        let (v, code) = json(&["verify", "--n", "2", "--q", q, "--p", "2", "--format", "json"]);
        assert_eq!(code, 0, "q = {q}");
        assert_eq!(v["verification"]["status"], "pass");
        assert_eq!(v["verification"]["checked_against_oracle"], true);
    }
    let (v, code) = json(&["verify", "--n", "3", "--q", "2", "--p", "3", "--form", "unitary", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["group"]["form"], "unitary");
}

#[test]
fn classify_json_shape_and_stability() {
    let args = ["classify", "--n", "2", "--q", "5", "--p", "2", "--format", "json"];
    let a = elabsub(&args);
    let b = elabsub(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["field"]["characteristic"], 5);
    let mut ns: Vec<u64> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["rank"] == 2)
        .map(|c| c["normalizer"]["order"].as_u64().unwrap())
        .collect();
    ns.sort();
    assert_eq!(ns, vec![8, 24]);
}

#[test]
fn invalid_configurations_fail() {
    for args in [
        vec!["classify", "--n", "4", "--q", "4", "--p", "2"],
        vec!["classify", "--n", "2", "--q", "6", "--p", "2"],
        vec!["classify", "--n", "2", "--q", "5", "--p", "4"],
        vec!["classify", "--q", "5", "--p", "2"],
    ] {
        let out = elabsub(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn cap_exceeded_exits_two_with_partial_output() {
    let (v, code) = json(&["verify", "--n", "2", "--q", "7", "--p", "2", "--group-cap", "10", "--format", "json"]);
    assert_eq!(code, 2);
    assert_eq!(v["verification"]["status"], "cap-exceeded");
    assert!(!v["classes"].as_array().unwrap().is_empty());
}

#[test]
fn report_renders_saved_output() {
    let dir = std::env::temp_dir().join(format!("elabsub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pgl4_5.json");
    let path = path.to_str().unwrap();
    let out = elabsub(&["classify", "--n", "4", "--q", "5", "--p", "2", "--format", "json", "--out", path]);
    assert!(out.status.success());
    let rep = elabsub(&["report", path]);
    assert!(rep.status.success());
    let text = String::from_utf8(rep.stdout).unwrap();
    assert!(text.contains("rank 4") && text.contains("Gamma_2(2)"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gamma_and_toral_subcommands() {
    let (v, code) = json(&["gamma", "--n", "4", "--q", "5", "--p", "2", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("relations_hold"));
    let out = elabsub(&["toral", "--n", "4", "--p", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("D_2 × trivial(1)"));
}
