use std::path::PathBuf;
use std::process::Command;

fn aheft() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aheft"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aheft-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn unknown_experiment_is_a_usage_error() {
    let out = aheft().args(["run", "--experiment", "at99"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at99"));
}

#[test]
fn malformed_flag_is_a_usage_error() {
    let out = aheft().args(["run", "--experiment", "at7", "--n", "four"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_desk_run_is_refused() {
    let out = aheft()
        .args(["run", "--experiment", "at5", "--n", "12", "--out"])
        .arg(scratch("never.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!scratch("never.json").exists());
}

#[test]
fn run_writes_schema_document() {
    let path = scratch("at7.json");
    let out = aheft().args(["run", "--experiment", "at7", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    for key in ["schema_version", "experiment_id", "config", "theory_constants", "per_seed", "aggregates", "series", "meta"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["experiment_id"], "at7");
    assert_eq!(doc["schema_version"], "1.0");
    let meta = &doc["meta"];
    assert!(meta["duration_s"].as_f64().unwrap() >= 0.0);
    assert!(meta["start_time"].is_string());
}

#[test]
fn flags_override_registry_defaults() {
    let path = scratch("at5.json");
    let out = aheft()
        .args(["run", "--experiment", "at5", "--n", "2", "--layers", "1", "--seeds", "2", "--steps", "12"])
        .args(["--master-seed", "9", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let cfg = &doc["config"];
    assert_eq!(cfg["n_list"], serde_json::json!([2]));
    assert_eq!(cfg["l_list"], serde_json::json!([1]));
    assert_eq!(cfg["n_seeds"], 2);
    assert_eq!(cfg["master_seed"], 9);
    assert_eq!(cfg["schedule"]["total_steps"], 12);
    let seeds: std::collections::BTreeSet<u64> =
        doc["per_seed"].as_array().unwrap().iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds.len(), 2);
}

#[test]
fn invariant_suite_passes() {
    let out = aheft().args(["verify", "--suite", "invariants"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
}
