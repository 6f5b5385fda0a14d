use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn coxmodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxmodel")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = coxmodel(&full);
    let value = serde_json::from_slice(&out.stdout).expect("JSON payload");
    (out.status.code().expect("exit code"), value)
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Committed tables with the class counts they must carry.
const GOLDEN: &[(&str, &str, &str, u64)] = &[
    ("A", "4", "full", 2),
    ("A", "5", "strong", 2),
    ("B", "3", "strong", 8),
    ("B", "4", "strong", 4),
    ("D", "4", "strong", 0),
    ("D", "5", "strong", 2),
    ("I2", "7", "full", 1),
    ("I2", "8", "strong", 4),
    ("H3", "3", "strong", 4),
];

fn golden_path(ty: &str, rank: &str, rel: &str) -> PathBuf {
    golden_dir().join(format!("classify_{ty}{rank}_{rel}.json"))
}

#[test]
fn classifications_match_golden_tables() {
    for &(ty, rank, rel, count) in GOLDEN {
        let path = golden_path(ty, rank, rel);
        let p = path.to_str().unwrap();
        let (code, payload) = json(&["classify", "--type", ty, "--rank", rank, "--relation", rel, "--golden", p]);
        assert_eq!(code, 0, "{ty}{rank} {rel} drifted from {p}");
        assert_eq!(payload["class_count"], count, "{ty}{rank} {rel}");
        let committed: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(committed["class_count"], count, "{p}");
        assert_eq!(committed["schema"], 1);
    }
}

#[test]
fn golden_drift_fails_with_a_diff() {
    let source = golden_path("A", "5", "strong");
    let mut table: Value = serde_json::from_str(&std::fs::read_to_string(source).unwrap()).unwrap();
    table["class_count"] = Value::from(3);
    let tampered = std::env::temp_dir().join(format!("coxmodel-drift-{}.json", std::process::id()));
    std::fs::write(&tampered, serde_json::to_string_pretty(&table).unwrap()).unwrap();
    let out = coxmodel(&["classify", "--type", "A", "--rank", "5", "--golden", tampered.to_str().unwrap()]);
    std::fs::remove_file(&tampered).ok();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("class_count"), "diff does not name the drifting field:\n{stderr}");
}

#[test]
fn type_a_rank_five_has_two_classes() {
    let (code, payload) = json(&["classify", "--type", "A", "--rank", "5", "--relation", "strong"]);
    assert_eq!(code, 0);
    assert_eq!(payload["class_count"], 2);
    assert_eq!(payload["command"], "classify");
}

#[test]
fn d5_pattern_model_verifies_in_the_oracle() {
    let (code, payload) = json(&["verify", "--model", "family:PD:5", "--oracle"]);
    assert_eq!(code, 0, "{payload}");
}

#[test]
fn d4_oracle_search_is_empty() {
    let (code, payload) = json(&["oracle", "search", "--type", "D", "--rank", "4"]);
    assert_eq!(code, 0);
    assert_eq!(payload["count"], 0);
}

#[test]
fn lr_coefficients() {
    let (code, payload) = json(&["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1"]);
    assert_eq!(code, 0);
    assert_eq!(payload["coefficient"], 2);
    let (code, payload) = json(&["lr", "--lam", "(1)", "--mu", "(1)"]);
    assert_eq!(code, 0);
    assert_eq!(payload["schema"], 1);
}

#[test]
fn exit_codes() {
    let not_perfect = r#"[{"type":"A","alpha":[2,3],"beta":["fpf","id"],"gamma":["triv","sgn"]}]"#;
    assert_eq!(coxmodel(&["verify", "--model", not_perfect]).status.code(), Some(2));
    assert_eq!(coxmodel(&["classify", "--type", "D", "--rank", "1"]).status.code(), Some(1));
    assert_eq!(coxmodel(&["char", "--index", "{not json"]).status.code(), Some(1));
    assert_eq!(coxmodel(&["lr", "--lam", "2,x", "--mu", "1"]).status.code(), Some(1));
    let capped = Command::new(env!("CARGO_BIN_EXE_coxmodel"))
        .args(["oracle", "classes", "--type", "D", "--rank", "5"])
        .env("COXMODEL_ORACLE_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn even_d_certificate_command() {
    let (code, payload) = json(&["d-even", "--rank", "6"]);
    assert_eq!(code, 0);
    assert!(payload["certificate"]["failing_cores"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["--json", "classify", "--type", "B", "--rank", "3"][..],
        &["oracle", "classes", "--type", "D", "--rank", "4"][..],
        &["--json", "char", "--index", r#"{"type":"B","alpha":[2,1],"beta":["id","id"],"gamma":["mp","sgn"]}"#][..],
    ] {
        let first = coxmodel(args);
        let second = coxmodel(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}
