use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dioph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn dioph(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_dioph")).current_dir(root()).args(args).arg("--compact").output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), doc)
}

#[test]
fn four_squares_of_seven() {
    let (code, doc) = dioph(&["four-squares", "--a", "7"]);
    assert_eq!(code, 0);
    assert_eq!(doc["report"]["witness"], serde_json::json!([2, 1, 1, 1]));
    let (code, doc) = dioph(&["four-squares", "--a", "-1"]);
    assert_eq!(code, 1);
    assert!(doc["report"]["witness"].is_null());
}

#[test]
fn validate_and_selected_suites_pass() {
    let (code, doc) = dioph(&["validate"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["schema"], "dioph/report/v1");
    let (code, doc) = dioph(&["lemmas", "--only", "growth,quotient"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["report"]["suites"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_suite_is_a_structured_error() {
    let (code, doc) = dioph(&["lemmas", "--only", "nonsense"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "domain");
}

#[test]
fn float_config_is_rejected() {
    let text = std::fs::read_to_string(root().join("instances/curated.toml")).unwrap();
    let path = scratch("float.toml");
    std::fs::write(&path, text.replacen("c = \"2\"", "c = 2.0", 1)).unwrap();
    let (code, doc) = dioph(&["--instance", path.to_str().unwrap(), "validate"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["path"], "constants.c");
}

#[test]
fn square_certificate_round_trip_and_tamper() {
    let cert = scratch("s2.json");
    let (code, doc) = dioph(&["certify-square", "--m", "2", "--out", cert.to_str().unwrap()]);
    assert_eq!(code, 0, "{doc}");
    let (code, doc) = dioph(&["verify", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["report"]["outcome"], "accept");
    let (code, _) = dioph(&["descent", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code, 0);

    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    file["body"]["mu"] = serde_json::json!(["5", "0"]);
    let bad = scratch("s2-bad.json");
    std::fs::write(&bad, file.to_string()).unwrap();
    let (code, doc) = dioph(&["verify", "--cert", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["report"]["outcome"], "reject");
    assert!(doc["report"]["first_failure"].is_string());
}

#[test]
fn element_certificate_with_leaves() {
    let cert = scratch("e.json");
    let (code, doc) = dioph(&["certify-element", "--element", "-3", "--with-leaves", "--out", cert.to_str().unwrap()]);
    assert_eq!(code, 0, "{doc}");
    let (code, doc) = dioph(&["verify", "--cert", cert.to_str().unwrap()]);
    assert_eq!(code, 0, "{doc}");
    let (code, doc) = dioph(&["certify-element", "--element", "0,1"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "not_in_base_ring");
}

#[test]
fn unattested_instance_cannot_be_certified() {
    let (code, doc) = dioph(&["--instance", "instances/gaussian_unattested.toml", "certify-square", "--m", "1"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "certificate");
    let (code, _) = dioph(&["--instance", "instances/gaussian_unattested.toml", "validate"]);
    assert_eq!(code, 0);
}

#[test]
fn reports_are_deterministic() {
    let a = dioph(&["lemmas", "--only", "existence"]).1;
    let b = dioph(&["lemmas", "--only", "existence"]).1;
    assert_eq!(a.to_string(), b.to_string());
}
