use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn shintani(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shintani")).args(args).arg("--out").arg(out).output().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sl2_twist_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = shintani(&["twist", "--family", "sl", "--n", "2", "--q", "3", "--r", "2"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v = report(&dir.path().join("twist-sl2-q3-r2.json"));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["data"]["order"], 648);
    assert_eq!(v["pass"], true);
    assert!(v["data"]["n_f"]["perm"].is_array());
    assert!(v["timing"]["seconds"].is_number());
    assert!(dir.path().join("twist-sl2-q3-r2-classes.csv").exists());
}

#[test]
fn gl2_twist_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let o = shintani(&["twist", "--family", "gl", "--n", "2", "--q", "3", "--r", "2", "--m-max", "2"], dir.path());
    assert!(o.status.success());
    let v = report(&dir.path().join("twist-gl2-q3-r2.json"));
    assert_eq!(v["data"]["sh_order"], 1);
    assert_eq!(v["data"]["moved"], serde_json::json!([]));
}

#[test]
fn invalid_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = shintani(&["twist", "--q", "4", "--k", "0"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = shintani(&["twist", "--p", "4"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn guard_violation_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let o = shintani(&["characters", "--max-order", "100"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 3\np = 2\nr = 2\nz = [2]\nm_list = [2]\n").unwrap();
    let o = shintani(&["flags", "--config", cfg.to_str().unwrap(), "--m-list", "2,3"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v = report(&dir.path().join("flags-gl3-q2-r2.json"));
    assert_eq!(v["config"]["m_list"], serde_json::json!([2, 3]));
    assert_eq!(v["data"]["cycles"][0]["n_comp"], 357);
    let csv = std::fs::read_to_string(dir.path().join("flags-gl3-q2-r2-counts.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn repeated_runs_match() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["characters", "--q", "3", "--seed", "4"];
    let mut texts = Vec::new();
    for _ in 0..2 {
        assert!(shintani(&args, dir.path()).status.success());
        let text = std::fs::read_to_string(dir.path().join("characters-sl2-q3-r2.json")).unwrap();
        texts.push(shintani_cli::strip_timing(&text).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}
