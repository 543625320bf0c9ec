use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn minrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minrank")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--output", "json"];
    a.extend_from_slice(args);
    let out = minrank(&a);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    minrank_cli::strip_timing(&mut v);
    v
}

#[test]
fn complete_example() {
    let out = minrank(&["complete", &data("example.matrix")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rank        2"), "{text}");
    assert_eq!(json(&["complete", &data("example.matrix")])["achieved_rank"], 2);
}

#[test]
fn text_and_json_agree() {
    let text = String::from_utf8(minrank(&["solve", &data("four_receivers.problem")]).stdout).unwrap();
    let v = json(&["solve", &data("four_receivers.problem")]);
    assert!(text.contains(&format!("rate        {}", v["rate"].as_str().unwrap())));
    for (i, t) in v["transmissions"].as_array().unwrap().iter().enumerate() {
        assert!(text.contains(&format!("y{} = {}", i + 1, t["expression"].as_str().unwrap())));
    }
}

#[test]
fn solve_writes_a_code_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("out.code");
    let out = minrank(&["solve", &data("four_receivers.problem"), "--code-out", code.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&["verify", &data("four_receivers.problem"), code.to_str().unwrap()]);
    assert_eq!(v["verification"]["valid"], true);
    assert_eq!(v["length"], 2);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(minrank(&["verify", &data("four_receivers.problem"), &data("four_receivers.code")]).status.code(), Some(0));

    let bad = minrank(&["verify", &data("four_receivers.problem"), &data("truncated.code")]);
    assert_eq!(bad.status.code(), Some(5));
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.contains("receiver 3") && text.contains("receiver 5"), "{text}");

    assert_eq!(minrank(&["verify", &data("four_receivers.problem"), &data("gf3_header.code")]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out_of_field = dir.path().join("two.code");
    std::fs::write(&out_of_field, "1 2 0 0 1\n").unwrap();
    assert_eq!(minrank(&["verify", &data("four_receivers.problem"), out_of_field.to_str().unwrap()]).status.code(), Some(2));

    // The same coefficients also form a valid code over GF(3).
    assert_eq!(minrank(&["--field", "3", "verify", &data("four_receivers.problem"), &data("four_receivers.code")]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.matrix");
    std::fs::write(&ragged, "1 X\n0\n").unwrap();
    let out = minrank(&["complete", ragged.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(minrank(&["complete", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(minrank(&["--field", "4", "complete", &data("example.matrix")]).status.code(), Some(2));
    assert_eq!(minrank(&["--prune", "0", "complete", &data("example.matrix")]).status.code(), Some(2));
    assert_eq!(minrank(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn oracle_budget_exit_4() {
    let out = minrank(&["oracle", &data("example.matrix"), "--budget", "100"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2^10 = 1024"));
    assert_eq!(json(&["oracle", &data("example.matrix")])["min_rank"], 2);
}

#[test]
fn tight_pruning_stays_sound() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("diag.matrix");
    let text: String = (0..8)
        .map(|i| (0..8).map(|j| if i == j { "1" } else { "X" }).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    std::fs::write(&p, text).unwrap();
    let full = json(&["complete", p.to_str().unwrap()]);
    assert_eq!(full["achieved_rank"], 1);
    let tight = json(&["--prune", "1", "complete", p.to_str().unwrap()]);
    let rank = tight["achieved_rank"].as_u64().unwrap();
    assert!((1..=8).contains(&rank));
    assert_eq!(tight["completed"].as_array().unwrap().len(), 8);
}

#[test]
fn block_two_complete() {
    let v = json(&["--block", "2", "complete", &data("example.matrix")]);
    assert_eq!(v["rows"], 10);
    assert_eq!(v["erasures"], 40);
    assert!(v["achieved_rank"].as_u64().unwrap() <= 4);
}

#[test]
fn threads_do_not_change_reports() {
    let one = json(&["--threads", "1", "solve", &data("four_receivers.problem")]);
    let four = json(&["--threads", "4", "solve", &data("four_receivers.problem")]);
    assert_eq!(one, four);
}

#[test]
fn bench_is_deterministic() {
    let args = ["--seed", "3", "bench", "--instances", "3", "--thresholds", "inf,50"];
    assert_eq!(json(&args), json(&args));
    let text = String::from_utf8(minrank(&args).stdout).unwrap();
    assert_eq!(text.lines().count(), 3, "{text}");
}

#[test]
fn gf3_solve() {
    let v = json(&["--field", "3", "solve", &data("four_receivers.problem")]);
    assert_eq!(v["field"], 3);
    assert_eq!(v["verification"]["valid"], true);
}
