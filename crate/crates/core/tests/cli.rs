mod common;

use std::fs;
use std::process::{Command, Output};

fn simkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simkit")).args(args).env_remove("SIMKIT_SEED").output().unwrap()
}

fn fixture(name: &str) -> String {
    common::fixtures_dir().join(name).to_str().unwrap().to_owned()
}

#[test]
fn score_prints_one_line_per_pair() {
    let expected = common::f1_expected();
    for m in ["dot", "cos", "os", "hts"] {
        let out = simkit(&["score", "--metric", m, "--file", &fixture("f1.embp")]);
        assert_eq!(out.status.code(), Some(0));
        let lines: Vec<f64> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
        let want = expected["metrics"][m]["scores"].as_array().unwrap();
        assert_eq!(lines.len(), want.len());
        for (got, w) in lines.iter().zip(want) {
            assert!((got - w.as_f64().unwrap()).abs() <= 1e-10, "{m}: {got} vs {w}");
        }
    }
}

#[test]
fn eval_renders_markdown() {
    let out = simkit(&["eval", "--config", &fixture("f1.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| PAWS | 90.8728 | 0.1136 | 0.0732* | **0.0254*** |"), "{text}");
    assert!(text.contains("| PAWS | 0.5663 | 0.5389 | 0.2156 | 0.2156 |"), "{text}");
}

#[test]
fn eval_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = simkit(&[
        "eval", "--config", &fixture("f1.toml"), "--format", "json", "--seed", "5", "--resamples", "50",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["settings"]["seed"], 5);
    assert_eq!(report["settings"]["bootstrap_resamples"], 50);
}

#[test]
fn seed_env_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("f1.embp"), dir.path().join("f1.embp")).unwrap();
    fs::copy(fixture("f1.manifest"), dir.path().join("f1.manifest")).unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "manifests = [\"f1.manifest\"]\noutput_format = \"json\"\n").unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_simkit"));
        cmd.args(["eval", "--config", cfg.to_str().unwrap()]).args(extra).env_remove("SIMKIT_SEED");
        if let Some(v) = env {
            cmd.env("SIMKIT_SEED", v);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["settings"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 0);
    assert_eq!(run(Some("17"), &[]), 17);
    assert_eq!(run(Some("17"), &["--seed", "3"]), 3);
}

#[test]
fn missing_manifest_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("f1.embp"), dir.path().join("f1.embp")).unwrap();
    fs::copy(fixture("f1.manifest"), dir.path().join("f1.manifest")).unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "manifests = [\"f1.manifest\", \"absent.manifest\"]\n").unwrap();
    let out = simkit(&["eval", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // the healthy dataset is still reported
    assert!(String::from_utf8(out.stdout).unwrap().contains("| PAWS |"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("absent.manifest"));
}

#[test]
fn corrupted_file_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = fs::read(fixture("f1.embp")).unwrap();
    bytes[100] ^= 0x40;
    fs::write(dir.path().join("f1.embp"), bytes).unwrap();
    fs::copy(fixture("f1.manifest"), dir.path().join("f1.manifest")).unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "manifests = [\"f1.manifest\"]\n").unwrap();
    let out = simkit(&["eval", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("integrity check failed"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(simkit(&["eval", "--bogus"]).status.code(), Some(1));
    assert_eq!(simkit(&["score", "--metric", "l2", "--file", "x"]).status.code(), Some(1));
    assert_eq!(simkit(&[]).status.code(), Some(1));
    assert_eq!(simkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_exits_two() {
    assert_eq!(simkit(&["score", "--metric", "os", "--file", "/nonexistent/x.embp"]).status.code(), Some(2));
    assert_eq!(simkit(&["eval", "--config", "/nonexistent/run.toml"]).status.code(), Some(2));
}

#[test]
fn bad_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "manifests = []\nalpha = 2.0\n").unwrap();
    assert_eq!(simkit(&["eval", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    fs::write(&cfg, "manifests = []\ncolour = \"red\"\n").unwrap();
    assert_eq!(simkit(&["eval", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let out = simkit(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
