use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hddl(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_hddl"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "hddl {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_detect_route_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("net.toml");
    let holes = dir.path().join("holes.jsonl");
    let trace = dir.path().join("loops.jsonl");
    hddl(&[
        "generate", "--nodes", "300", "--area", "200", "--seed", "3",
        "--carve", "100,100,60", "--out", path(&scenario),
    ]);
    let text = fs::read_to_string(&scenario).unwrap();
    assert!(text.contains("hole_radius = 60.0"));

    hddl(&["detect", path(&scenario), "--out", path(&holes), "--trace", path(&trace)]);
    let loops = fs::read_to_string(&trace).unwrap();
    assert!(loops.lines().count() >= fs::read_to_string(&holes).unwrap().lines().count());
    for line in loops.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["vertices"].as_array().unwrap().len() >= 3);
    }

    let out = hddl(&["route", path(&scenario), "--src", "0", "--dst", "5", "--protocol", "gpsr"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["protocol"], "gpsr");
    let hops = v["path"]["hops"].as_array().unwrap();
    assert_eq!(hops[0], 0);
    if v["path"]["delivered"].as_bool().unwrap() {
        assert_eq!(hops.last().unwrap(), 5);
    }
}

#[test]
fn explicit_scenario_lists_every_node() {
    let out = hddl(&["generate", "--nodes", "12", "--area", "50x40", "--explicit"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("[[nodes]]").count(), 12);
    assert!(text.contains("area_height = 40.0"));
}

#[test]
fn experiment_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = hddl(&[
        "experiment", "--nodes", "120,200", "--seeds", "2", "--pairs", "5", "--area", "200",
        "--carve", "100,100,60", "--out", path(dir.path()),
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("hddl"));
    for name in ["routes.csv", "networks.csv", "summary.csv", "holes.jsonl"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(&cfg, "node_counts = [80]\nnetworks_per_count = 3\ndelta = 3.0\n").unwrap();
    let out = hddl(&["experiment", "--config", path(&cfg), "--seeds", "7", "--print-config"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("networks_per_count = 7"));
    assert!(text.contains("delta = 3.0"));
    assert!(text.contains("node_counts = [80]"));
}

#[test]
fn bad_arguments_are_rejected() {
    let status = Command::new(env!("CARGO_BIN_EXE_hddl"))
        .args(["generate", "--carve", "1,2"])
        .output()
        .unwrap()
        .status;
    assert!(!status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(&cfg, "no_such_field = 1\n").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_hddl"))
        .args(["experiment", "--config", path(&cfg)])
        .output()
        .unwrap()
        .status;
    assert!(!status.success());
}
