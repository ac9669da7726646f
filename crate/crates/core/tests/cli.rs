use std::process::{Command, Output};

use pellkit::cli::{OutputRecord, Payload};

fn pellkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellkit")).args(args).env_remove("PELLKIT_BOUND").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn record(o: &Output) -> OutputRecord {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(pellkit(&["cf", "14"]).status.code(), Some(0));
    assert_eq!(pellkit(&["cf", "16"]).status.code(), Some(2));
    assert_eq!(pellkit(&["solve", "7", "-1"]).status.code(), Some(0));
    assert_eq!(pellkit(&["solve", "21", "-4", "--bound", "10"]).status.code(), Some(3));
    assert_eq!(pellkit(&["family", "--family", "2", "--a", "2", "--b", "1", "1"]).status.code(), Some(2));
    assert_eq!(pellkit(&["bogus"]).status.code(), Some(2));
    assert_eq!(pellkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_and_family_outputs() {
    let o = pellkit(&["solve", "3", "1", "--n", "3"]);
    assert!(stdout(&o).starts_with("x = 26\ny = 15\n"));
    let o = pellkit(&["solve", "3", "-4"]);
    assert!(stdout(&o).starts_with("no solution"));
    let o = pellkit(&["family", "--family", "1", "--a", "2", "--b", "2", "1", "--n", "2", "--format", "json"]);
    let r = record(&o);
    assert_eq!(r.method, "closed-form");
    match r.result {
        Payload::Solvability { status, solution: Some(s), .. } => {
            assert_eq!(status, "solvable");
            assert_eq!(serde_json::to_string(&s.x).unwrap(), "\"449\"");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bound_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_pellkit"))
        .args(["solve", "21", "-4", "--format", "json"])
        .env("PELLKIT_BOUND", "37")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    match record(&o).result {
        Payload::Solvability { searched_bound: Some(b), .. } => assert_eq!(serde_json::to_string(&b).unwrap(), "\"37\""),
        other => panic!("{other:?}"),
    }
    // the flag wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_pellkit"))
        .args(["solve", "21", "-4", "--bound", "5"])
        .env("PELLKIT_BOUND", "37")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("y <= 5"));
}

fn has_float_token(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(_) => true,
        serde_json::Value::Array(a) => a.iter().any(has_float_token),
        serde_json::Value::Object(o) => o.values().any(has_float_token),
        _ => false,
    }
}

#[test]
fn json_has_only_string_numbers() {
    for args in [
        &["cf", "1000001", "--format", "json"][..],
        &["solve", "61", "1", "--n", "5", "--format", "json"],
        &["solve", "13", "-1", "--format", "json"],
        &["family", "--corollary", "9k2-6", "--k", "4", "4", "--n", "3", "--format", "json"],
        &["verify", "--a-max", "4", "--b-max", "3", "--n-max", "2", "--format", "json"],
    ] {
        let o = pellkit(args);
        let value: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(!has_float_token(&value), "{args:?}: {value}");
        let r: OutputRecord = serde_json::from_value(value).unwrap();
        let re: OutputRecord = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(re, r);
    }
}

#[test]
fn verify_output_is_identical_for_any_job_count() {
    let base = pellkit(&["verify", "--a-max", "8", "--b-max", "6", "--n-max", "4"]);
    assert_eq!(base.status.code(), Some(0));
    for jobs in ["2", "3", "8"] {
        let o = pellkit(&["verify", "--a-max", "8", "--b-max", "6", "--n-max", "4", "--jobs", jobs]);
        assert_eq!(o.stdout, base.stdout);
        let mut a = serde_json::to_value(record(&pellkit(&[
            "verify", "--a-max", "8", "--b-max", "6", "--n-max", "4", "--format", "json", "--jobs", jobs,
        ])))
        .unwrap();
        let mut b = serde_json::to_value(record(&pellkit(&[
            "verify", "--a-max", "8", "--b-max", "6", "--n-max", "4", "--format", "json",
        ])))
        .unwrap();
        // inputs echo the job count and timing is wall-clock
        for v in [&mut a, &mut b] {
            v.as_object_mut().unwrap().remove("timing_ms");
            v["inputs"].as_object_mut().unwrap().remove("jobs");
        }
        assert_eq!(a, b);
    }
}

#[test]
fn verify_degenerate_grid() {
    let o = pellkit(&["verify", "--a-max", "1", "--b-max", "1", "--n-max", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("discrepancies: 0"));
    let o = pellkit(&["verify", "--a-max", "6", "--b-max", "4", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
}
