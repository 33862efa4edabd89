use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    selfsim(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(selfsim(args).stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn ssc_exit_codes() {
    assert_eq!(code(&["check-ssc", "fixture:example25"]), 0);
    assert_eq!(code(&["check-ssc", "fixture:halves"]), 1);
    assert_eq!(
        code(&["check-ssc", "fixture:near-touching", "--depth", "1"]),
        2
    );
    assert_eq!(
        code(&["check-ssc", "fixture:near-touching", "--depth", "12"]),
        0
    );
}

#[test]
fn decision_exit_codes() {
    assert_eq!(
        code(&[
            "openness",
            "fixture:example25",
            "--map",
            "fixture:example25-f"
        ]),
        3
    );
    assert_eq!(code(&["symmetry", "fixture:broken-pair"]), 4);
    assert_eq!(code(&["symmetry", "fixture:cantor-pair"]), 0);
    assert_eq!(code(&["commensurability", "1/9", "1/27"]), 0);
    assert_eq!(code(&["commensurability", "1/2", "1/3"]), 1);
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let whole = stdout(&["fixture", "cantor"]);
    let cut = write(dir.path(), "cut.json", &whole[..whole.len() / 2]);
    assert_eq!(code(&["check-ssc", &cut]), 64);
    let missing = dir.path().join("absent.json");
    assert_eq!(code(&["check-ssc", missing.to_str().unwrap()]), 64);
    assert_eq!(code(&["check-ssc", "fixture:nope"]), 64);
    assert_eq!(code(&["no-such-command"]), 64);
    // well-formed, but outside the domain of the procedure
    assert_eq!(code(&["commensurability", "3/2", "1/3"]), 3);
}

#[test]
fn fixture_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "e.json", &stdout(&["fixture", "example25"]));
    let direct = stdout(&["chains", "fixture:example25"]);
    assert_eq!(stdout(&["chains", &path]), direct);
    assert!(direct.contains("{1} {2, 3, 4, 5} {6, 7, 8, 9}"), "{direct}");
}

#[test]
fn embed_then_openness_with_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(
        dir.path(),
        "f.json",
        r#"{"ratio": "1/9", "trans": ["2/9"]}"#,
    );
    let cert = dir.path().join("cert.json");
    let cert = cert.to_str().unwrap();
    assert_eq!(
        code(&["embed", "fixture:cantor", "--map", &map, "--out", cert]),
        0
    );
    let out = stdout(&[
        "openness",
        "fixture:cantor",
        "--map",
        &map,
        "--evidence",
        cert,
    ]);
    for w in ["1211", "1212", "1221", "1222"] {
        assert!(out.contains(w), "{out}");
    }

    // an edited relation no longer matches the recorded digest
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(cert).unwrap()).unwrap();
    doc["relations"][0]["word"] = Value::from("2");
    let bad = write(dir.path(), "bad.json", &doc.to_string());
    assert_eq!(
        code(&[
            "openness",
            "fixture:cantor",
            "--map",
            &map,
            "--evidence",
            &bad
        ]),
        64
    );
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn structured_output_is_deterministic() {
    for args in [
        ["--format", "structured", "chains", "fixture:example25"].as_slice(),
        [
            "--format",
            "structured",
            "embed",
            "fixture:example25",
            "--map",
            "fixture:example25-f",
        ]
        .as_slice(),
        ["--format", "structured", "symmetry", "fixture:fifths-pair"].as_slice(),
    ] {
        let a: Value = serde_json::from_str(&stdout(args)).unwrap();
        let b: Value = serde_json::from_str(&stdout(args)).unwrap();
        assert!(a["timings"]["total_ms"].is_number());
        assert_eq!(without_timings(a.clone()), without_timings(b));
        for key in [
            "command",
            "inputs",
            "results",
            "certificates",
            "exit_status",
        ] {
            assert!(a.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cantor.svg");
    assert_eq!(
        code(&[
            "render",
            "fixture:cantor",
            "--depth",
            "3",
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("class=\"cell\"").count(), 8);
}
