use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn qracah(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qracah")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const D1: &str = r#"{"q":"2","a":"3","b":"7","factors":[{"d":1,"mu":"5","xi":"1"}]}"#;
const TENSOR: &str = r#"{"q":"2","a":"3","b":"7","factors":[{"d":1,"mu":"5"},{"d":1,"mu":"11"}],"suites":["psi"],"gauges":3}"#;

#[test]
fn verify_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", D1);
    let (code, stdout, _) = qracah(&["verify", "--config", &cfg]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn q_one_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &D1.replace(r#""q":"2""#, r#""q":"1""#));
    let out = dir.path().join("r.json").display().to_string();
    let (code, stdout, _) = qracah(&["verify", "--config", &cfg, "--output", &out]);
    assert_eq!(code, 2);
    assert!(stdout.contains("root of unity"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["status"], "config-error");
    assert_eq!(v["config"]["q"], "1");
}

#[test]
fn malformed_json_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", "{ not json");
    let (code, _, _) = qracah(&["verify", "--config", &cfg]);
    assert_eq!(code, 2);
}

#[test]
fn psi_only_on_tensor_module() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", TENSOR);
    let (code, stdout, _) = qracah(&["verify", "--config", &cfg]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["suite"] == "psi"));
    let theorem = checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("psi = -a L00^-1 L01"))
        .count();
    assert_eq!(theorem, 4);
    assert_eq!(v["dimension"], 4);
}

#[test]
fn suites_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", D1);
    let (code, stdout, _) = qracah(&["verify", "--config", &cfg, "--suites", "relations,equitable"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["suite"] == "relations" || c["suite"] == "equitable"));
    let (code, _, _) = qracah(&["verify", "--config", &cfg, "--suites", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn degenerate_point_exits_two_with_diagnosis() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &D1.replace(r#""mu":"5""#, r#""mu":"9""#));
    let (code, stdout, _) = qracah(&["verify", "--config", &cfg]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["status"], "degenerate");
    assert!(v["diagnosis"].is_string());
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", D1);
    let a = dir.path().join("a.json").display().to_string();
    let b = dir.path().join("b.json").display().to_string();
    let (ca, _, _) = qracah(&["sweep", "--config", &cfg, "--count", "5", "--seed", "1", "--output", &a]);
    let (cb, _, _) = qracah(&["sweep", "--config", &cfg, "--count", "5", "--seed", "1", "--output", &b]);
    assert_eq!((ca, cb), (0, 0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["count"], 5);
    assert_eq!(v["fail"], 0);
}

#[test]
fn sweep_count_zero_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", D1);
    let (code, stdout, _) = qracah(&["sweep", "--config", &cfg, "--count", "0", "--seed", "1"]);
    assert_eq!(code, 2);
    assert!(stdout.contains("sweep.count"));
}

#[test]
fn schema_is_printed() {
    let (code, stdout, _) = qracah(&["show-config-schema"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["type"], "object");
}
