use std::fs;
use std::process::Command;

use serde_json::Value;

fn higgs(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_higgs")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn fixture_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, expected) in [("p1-ramified-positive", true), ("p1-trivial-negative", false)] {
        let path = dir.path().join(format!("{name}.json"));
        let path = path.to_str().unwrap();
        let (code, _, _) = higgs(&["fixture", name, path]);
        assert_eq!(code, 0);
        let (code, report, _) = higgs(&["check", path, "--window", "-6:6"]);
        assert_eq!(code, 0, "negative verdicts still exit 0");
        assert_eq!(report["contained"], Value::Bool(expected));
        assert_eq!(report["residual_verdict"], Value::Bool(expected));
        assert_eq!(report["consistent"], Value::Bool(true));
        assert_eq!(report["precision"]["window"], serde_json::json!([-6, 6]));
        assert_eq!(report["totally_ramified"]["matches_residuals"], Value::Bool(true));
    }
}

#[test]
fn decompose_and_hitchin_on_a_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let path = path.to_str().unwrap();
    assert_eq!(higgs(&["fixture", "p1-ramified-positive", path]).0, 0);
    let (code, dec, _) = higgs(&["decompose", path]);
    assert_eq!(code, 0);
    assert_eq!(dec["partition"], serde_json::json!([2]));
    let (code, hit, _) = higgs(&["--json-indent", "2", "hitchin", path, "--trivialize"]);
    assert_eq!(code, 0);
    assert_eq!(hit["p"]["n"], serde_json::json!(2));
    assert!(hit["trivialization"].is_array());
}

#[test]
fn operational_errors_exit_two_with_a_name() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let (code, report, stderr) = higgs(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"], "ParseError");
    assert!(!stderr.is_empty());

    let (code, report, _) = higgs(&["fixture", "no-such-fixture"]);
    assert_eq!(code, 2);
    assert_eq!(report["error"], "UnknownFixture");

    // T² has a repeated root.
    let sq = dir.path().join("sq.json");
    fs::write(
        &sq,
        r#"{"p": {"n": 2, "a": [{"precision": "exact", "coeffs": []}, {"precision": "exact", "coeffs": []}]}}"#,
    )
    .unwrap();
    let (code, report, _) = higgs(&["decompose", sq.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"], "NotSeparable");

    let (code, _, _) = higgs(&["check", sq.to_str().unwrap(), "--window", "1:4"]);
    assert_eq!(code, 2);
}
