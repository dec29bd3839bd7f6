use std::process::{Command, Output};

use qwpps::{run, verify_command, VerifyFormat, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE};
use qwpps_core::scenarios::build_all;
use serde_json::Value;

fn qwpps(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("qwpps").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwpps")).args(args).output().unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/");
    let text = std::fs::read_to_string(format!("{path}{name}")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn classical_line_csv() {
    let (code, out, _) = qwpps(&[
        "simulate",
        "--walk",
        "classical-line",
        "--steps",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "x,p\n-2,0.25\n0,0.5\n2,0.25\n");
}

#[test]
fn negative_steps_is_usage_error() {
    let (code, out, err) = qwpps(&["simulate", "--walk", "hadamard-line", "--steps", "-1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(!err.is_empty());
    assert_eq!(
        bin(&["simulate", "--walk", "hadamard-line", "--steps", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn hadamard_series_csv() {
    let (code, out, _) = qwpps(&[
        "simulate",
        "--walk",
        "hadamard-line",
        "--steps",
        "100",
        "--coin-init",
        "plus-i",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,p"));
    let rows: Vec<(i64, f64)> = lines
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert!(rows.len() <= 101);
    assert!(rows.iter().all(|(x, _)| x % 2 == 0));
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-10);
    let mean: f64 = rows.iter().map(|r| r.0 as f64 * r.1).sum();
    assert!(mean.abs() < 1e-9);
}

#[test]
fn simulate_json_and_series() {
    let (code, out, _) = qwpps(&[
        "simulate",
        "--walk",
        "hadamard-line",
        "--steps",
        "4",
        "--series",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["coin_init"], "plus-i");
    assert_eq!(v["snapshots"].as_array().unwrap().len(), 5);
    let (_, csv, _) = qwpps(&[
        "simulate",
        "--walk",
        "classical-line",
        "--steps",
        "1",
        "--series",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "t,x,p\n0,0,1\n1,-1,0.5\n1,1,0.5\n");
}

#[test]
fn scenario3_report_counts_trajectories() {
    let (code, out, _) = qwpps(&["pps", "--scenario", "scenario3", "--steps", "7", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_valid(&schema("pps-report.schema.json"), &v);
    assert_eq!(v["trajectory_count"], "192");
    assert_eq!(v["steps"][0]["certain"], serde_json::json!(["1", "4"]));
    assert_eq!(v["exclusivity_scope"], "operator");
}

#[test]
fn three_box_witnesses() {
    let (code, out, _) = qwpps(&["pps", "--scenario", "three-box", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_valid(&schema("pps-report.schema.json"), &v);
    assert_eq!(v["paradox_found"], true);
    let same: Vec<&Value> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|w| w["kind"] == "same_time" && w["t"] == 0)
        .collect();
    assert_eq!(same.len(), 1);
    assert_eq!(
        (same[0]["first"].as_str(), same[0]["second"].as_str()),
        (Some("A"), Some("B"))
    );
    let p = v["postselection_probability"].as_f64().unwrap();
    assert!((p - 1.0 / 9.0).abs() < 1e-12);
}

#[test]
fn every_report_validates() {
    let v = schema("pps-report.schema.json");
    for name in [
        "three-box",
        "scenario1",
        "scenario2",
        "scenario3",
        "scenario4",
        "hadamard-3cycle",
    ] {
        let (code, out, _) = qwpps(&["pps", "--scenario", name, "--format", "json"]);
        assert_eq!(code, EXIT_OK, "{name}");
        assert_valid(&v, &serde_json::from_str(&out).unwrap());
    }
}

#[test]
fn scenario1_leap_velocity_in_report() {
    let (_, out, _) = qwpps(&["pps", "--scenario", "scenario1", "--steps", "12", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let hit = v["witnesses"].as_array().unwrap().iter().any(|w| {
        w["kind"] == "cross_time"
            && w["earlier"] == serde_json::json!({"t": 4, "position": "-4"})
            && w["later"] == serde_json::json!({"t": 8, "position": "8"})
            && w["velocity"] == 3.0
    });
    assert!(hit);
}

#[test]
fn scenario1_bad_horizon() {
    let (code, _, err) = qwpps(&["pps", "--scenario", "scenario1", "--steps", "10"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("T must be divisible by 3"), "{err}");
}

#[test]
fn unknown_scenario_and_extra_parameter() {
    assert_eq!(qwpps(&["pps", "--scenario", "nope"]).0, EXIT_USAGE);
    assert_eq!(qwpps(&["pps", "--scenario", "three-box", "--steps", "3"]).0, EXIT_USAGE);
    assert_eq!(qwpps(&["pps"]).0, EXIT_USAGE);
    assert_eq!(qwpps(&["pps", "--scenario", "three-box", "--bogus"]).0, EXIT_USAGE);
}

#[test]
fn scenario4_trajectories_hop_components() {
    let (code, out, _) = qwpps(&["trajectories", "--scenario", "scenario4", "--steps", "6"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l.ends_with("  hop")));
    assert!(out.lines().last().unwrap().contains("component-hop yes"));
    assert_eq!(out.lines().count(), 101);
}

#[test]
fn scenario2_trajectory_is_flagged() {
    let (code, out, _) = qwpps(&["trajectories", "--scenario", "scenario2", "--s", "3", "--steps", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "0 7 0 7 0  leap\ntotal 1  leap-free 0  leap yes  component-hop no\n"
    );
}

#[test]
fn cap_zero_prints_count_only() {
    let (code, out, _) = qwpps(&["trajectories", "--scenario", "scenario3", "--cap", "0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "total 192  leap-free 0  leap yes  component-hop no\n");
}

#[test]
fn verify_fresh_build_passes() {
    let (code, out, _) = qwpps(&["verify"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().last().unwrap().starts_with("all "));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_subset() {
    let (code, out, _) = qwpps(&["verify", "--only", "scenario3"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.contains("scenario3")));
    assert_eq!(qwpps(&["verify", "--only", "nope"]).0, EXIT_USAGE);
    let (_, json, _) = qwpps(&["verify", "--only", "three-box", "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["failed"], 0);
}

#[test]
fn tampered_fixture_fails_verify() {
    let mut bundles = build_all().unwrap();
    let b = bundles.iter_mut().find(|b| b.name == "scenario3").unwrap();
    b.expected.certain[0].positions.pop();
    let mut out = Vec::new();
    assert_eq!(verify_command(&bundles, VerifyFormat::Table, &mut out), EXIT_RUNTIME);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("FAIL  scenario3"));
    assert!(text.lines().last().unwrap().ends_with("checks failed"));
}

#[test]
fn export_and_reload_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s4.json");
    let path = path.to_str().unwrap();
    let (code, out, _) = qwpps(&["export", "scenario", "--scenario", "scenario4", "--output", path]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_valid(&schema("scenario.schema.json"), &doc);
    let (_, from_file, _) = qwpps(&["pps", "--file", path, "--format", "json"]);
    let (_, built_in, _) = qwpps(&["pps", "--scenario", "scenario4", "--format", "json"]);
    assert_eq!(from_file, built_in);
    assert_eq!(qwpps(&["pps", "--file", path, "--steps", "3"]).0, EXIT_USAGE);
}

#[test]
fn malformed_scenario_file_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "x", "extra": 1}"#).unwrap();
    assert_eq!(qwpps(&["pps", "--file", path.to_str().unwrap()]).0, EXIT_RUNTIME);
    assert_eq!(qwpps(&["pps", "--file", "/nonexistent/qwpps.json"]).0, EXIT_RUNTIME);
}

#[test]
fn figure_export() {
    let (code, out, _) = qwpps(&["export", "figure", "--steps", "100"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,p_quantum,p_classical");
    assert_eq!(lines.len(), 102);
    assert!(lines[1].starts_with("-100,"));
    assert!(lines[51].starts_with("0,"));
}

#[test]
fn list_and_help() {
    let (code, out, _) = qwpps(&["list"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| !l.starts_with(' ')).count(), 6);
    let (code, out, _) = qwpps(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}

#[test]
fn binary_output_is_deterministic_and_uncoloured() {
    let a = bin(&["pps", "--scenario", "scenario1", "--format", "json"]);
    let b = bin(&["pps", "--scenario", "scenario1", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = bin(&["verify"]);
    assert!(v.status.success());
    assert!(!v.stdout.contains(&0x1b));
}

#[test]
fn no_color_variable_disables_colour() {
    std::env::set_var("QWPPS_NO_COLOR", "1");
    assert!(!qwpps::fmt::Style::detect(true).color);
    std::env::remove_var("QWPPS_NO_COLOR");
    assert!(qwpps::fmt::Style::detect(true).color);
    assert!(!qwpps::fmt::Style::detect(false).color);
}
