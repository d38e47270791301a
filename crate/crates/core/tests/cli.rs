use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn chaoscomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoscomp"))
        .args(args)
        .output()
        .unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = chaoscomp(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn xor_trains_to_perfect_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("xor.csv");
    let model = dir.path().join("model.json");
    assert!(chaoscomp(&["synth", "--kind", "xor", "--out", s(&data)])
        .status
        .success());
    let report = ok_json(&[
        "train",
        "--data",
        s(&data),
        "--n",
        "3",
        "--threshold",
        "0.30",
        "--out",
        s(&model),
    ]);
    assert_eq!(report["train_metrics"]["accuracy"], 1.0);

    let metrics = ok_json(&["evaluate", "--model", s(&model), "--data", s(&data)]);
    assert_eq!(metrics["macro_f1"], 1.0);
    assert_eq!(metrics, report["train_metrics"]);

    let out = chaoscomp(&["predict", "--model", s(&model), "--data", s(&data)]);
    let text = String::from_utf8(out.stdout).unwrap();
    let labels: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(labels, ["0", "1", "1", "0"]);
}

#[test]
fn train_then_evaluate_reproduces_training_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("moons.csv");
    let model = dir.path().join("model.json");
    let synth = chaoscomp(&[
        "synth",
        "--kind",
        "moons",
        "--samples",
        "120",
        "--seed",
        "7",
        "--out",
        s(&data),
    ]);
    assert!(synth.status.success());
    let report = ok_json(&["train", "--data", s(&data), "--n", "2", "--out", s(&model)]);
    let metrics = ok_json(&["evaluate", "--model", s(&model), "--data", s(&data)]);
    assert_eq!(metrics, report["train_metrics"]);
}

#[test]
fn fair_coin_entropy_is_one_bit() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("coin.csv");
    let model = dir.path().join("model.json");
    // one row per class; each row binarizes to a single 0 and a single 1
    std::fs::write(&data, "a,b,label\n0,1,x\n1,0,y\n").unwrap();
    ok_json(&[
        "train",
        "--data",
        s(&data),
        "--n",
        "1",
        "--no-augment",
        "--out",
        s(&model),
    ]);
    let report = ok_json(&["entropy", "--model", s(&model)]);
    assert_eq!(report["n"], 1);
    for class in report["classes"].as_array().unwrap() {
        assert_eq!(class["entropy_bits"], 1.0);
        assert_eq!(class["baker_entropy_bits"], 1.0);
    }
}

#[test]
fn synth_is_seeded_and_gates_have_four_rows() {
    let a = chaoscomp(&["synth", "--kind", "circles", "--seed", "3"]).stdout;
    let b = chaoscomp(&["synth", "--kind", "circles", "--seed", "3"]).stdout;
    let c = chaoscomp(&["synth", "--kind", "circles", "--seed", "4"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 501);

    let gate = chaoscomp(&["synth", "--kind", "nor", "--samples", "900"]).stdout;
    assert_eq!(String::from_utf8(gate).unwrap().lines().count(), 5);
}

#[test]
fn boundary_grid_has_resolution_squared_rows() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("xor.csv");
    let model = dir.path().join("model.json");
    assert!(chaoscomp(&["synth", "--kind", "xor", "--out", s(&data)])
        .status
        .success());
    ok_json(&[
        "train",
        "--data",
        s(&data),
        "--n",
        "3",
        "--threshold",
        "0.3",
        "--out",
        s(&model),
    ]);
    let out = chaoscomp(&["boundary", "--model", s(&model), "--resolution", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,label");
    let labels: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(labels, ["0", "1", "1", "0"]);
}

#[test]
fn tune_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("linear.csv");
    let cv = dir.path().join("cv.csv");
    let model = dir.path().join("model.json");
    let test = dir.path().join("test.csv");
    assert!(chaoscomp(&[
        "synth",
        "--kind",
        "linear",
        "--samples",
        "100",
        "--out",
        s(&data)
    ])
    .status
    .success());
    let report = ok_json(&[
        "tune",
        "--data",
        s(&data),
        "--thresholds",
        "0.3,0.5,0.7",
        "--n-values",
        "1,2",
        "--folds",
        "3",
        "--cv-out",
        s(&cv),
        "--out",
        s(&model),
        "--test-out",
        s(&test),
    ]);
    assert!(report["best_cv_macro_f1"].as_f64().unwrap() > 0.5);
    let cv_text = std::fs::read_to_string(&cv).unwrap();
    assert_eq!(cv_text.lines().count(), 1 + 3 * 2 * 3);
    let metrics = ok_json(&["evaluate", "--model", s(&model), "--data", s(&test)]);
    assert_eq!(metrics, report["test_metrics"]);
}

#[test]
fn usage_errors_exit_with_2() {
    let out = chaoscomp(&["compress"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(chaoscomp(&["train", "--bogus"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("one.csv");
    std::fs::write(&data, "a,label\n1,x\n2,y\n").unwrap();
    let out = chaoscomp(&["train", "--data", s(&data)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("two features"));
}
