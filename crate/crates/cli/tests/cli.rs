use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_athermal-markov"))
        .args(args)
        .env("ATHERMAL_MARKOV_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn metadata(dir: &Path, name: &str) -> serde_json::Value {
    let raw = std::fs::read_to_string(dir.join(format!("{name}-metadata.json"))).unwrap();
    serde_json::from_str(&raw).unwrap()
}

#[test]
fn entanglement_study_writes_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["fig2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[PASS]"));
    for f in ["fig2-log_negativity.csv", "fig2-log_negativity.svg", "fig2-checks.csv", "fig2-metadata.json"] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("fig2-log_negativity.csv")).unwrap();
    assert!(csv.starts_with("measure,epsilon,temperature,unperturbed,perturbed,delta"));
    assert_eq!(metadata(dir.path(), "fig2")["passed"], true);
}

#[test]
fn no_svg_skips_plots() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["fig2", "--no-svg", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!dir.path().join("fig2-log_negativity.svg").exists());
}

#[test]
fn overrides_and_seed_list_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&[
        "distance",
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "epsilons=[0.05]",
        "--seed-list",
        "17",
        "--grid",
        "8",
    ]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stderr(&o));
    let m = metadata(dir.path(), "distance");
    assert_eq!(m["epsilons"], serde_json::json!([0.0, 0.05]));
    assert_eq!(m["seed_sequence"], 17);
    assert_eq!(m["optimizer"]["grid_resolution"], 8);
}

#[test]
fn missing_config_is_a_usage_error() {
    let o = bin(&["run", "--config", "/nonexistent/exp.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/exp.json"));
}

#[test]
fn bad_override_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["fig2", "--out", dir.path().to_str().unwrap(), "--set", "optimizer.bogus=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("optimizer.bogus"), "{}", stderr(&o));
}

#[test]
fn template_round_trips_through_validate_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let t = bin(&["template", "fig2"]);
    assert_eq!(t.status.code(), Some(0));
    let cfg = dir.path().join("exp.json");
    std::fs::write(&cfg, t.stdout).unwrap();
    let v = bin(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
    assert!(stdout(&v).contains("system 2 x bath 2"));
    let out = dir.path().join("out");
    let r = bin(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    assert!(out.join("fig2-checks.csv").is_file());
}

#[test]
fn unknown_template_is_a_usage_error() {
    assert_eq!(bin(&["template", "fig9"]).status.code(), Some(2));
}

#[test]
fn invalid_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_athermal-markov"))
        .args(["template", "fig2"])
        .env("ATHERMAL_MARKOV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
