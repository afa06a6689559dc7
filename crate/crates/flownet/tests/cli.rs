use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn flownet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flownet"))
        .args(args)
        .env_remove("FLOWNET_TOL_CONSENSUS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: stdout {:?} stderr {:?}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_preset() {
    let out = flownet(&["analyze", path_str(&scenario("five_vertex.json"))]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["balanced"], false);
    assert_eq!(r["strongly_connected"], true);
    assert_eq!(r["cycle_cover"]["k"], 3);
    assert_eq!(r["verdict"]["consensus_expected"], false);
    assert_eq!(r["verdict"]["reason"], "unbalanced");
}

#[test]
fn analyze_triangle_and_islands() {
    let r = json(&flownet(&["analyze", path_str(&scenario("triangle.json"))]));
    assert_eq!(r["balanced"], true);
    assert_eq!(r["cycle_cover"]["k"], 1);
    assert_eq!(r["cycle_cover"]["non_overlapping"], true);
    assert_eq!(r["verdict"]["consensus_expected"], true);

    let r = json(&flownet(&[
        "analyze",
        path_str(&scenario("disconnected.json")),
    ]));
    assert_eq!(r["weakly_connected"], false);
    assert_eq!(r["verdict"]["consensus_expected"], false);
}

#[test]
fn mixed_constraints_are_out_of_scope() {
    let r = json(&flownet(&["analyze", path_str(&scenario("mixed.json"))]));
    assert_eq!(r["verdict"]["consensus_expected"], Value::Null);
    assert_eq!(r["verdict"]["reason"], "out_of_theory_scope");
}

#[test]
fn simulate_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let svg = dir.path().join("t.svg");
    let out = flownet(&[
        "simulate",
        path_str(&scenario("five_vertex.json")),
        "--csv",
        path_str(&csv),
        "--svg",
        path_str(&svg),
        "--lyapunov",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["steady"], true);
    assert_eq!(r["consensus"], false);
    assert_eq!(r["final_time"], 100.0);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("t,x_0,"));
    assert!(header.ends_with(",u_6,V"));
    assert_eq!(lines.count(), r["samples"].as_u64().unwrap() as usize);
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.trim_end().ends_with("</svg>"));
}

#[test]
fn zero_horizon_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("triangle.json"))
        .unwrap()
        .replace("\"horizon\": 100.0", "\"horizon\": 0.0");
    let file = dir.path().join("zero.json");
    std::fs::write(&file, text).unwrap();
    let csv = dir.path().join("zero.csv");
    let out = flownet(&["simulate", path_str(&file), "--csv", path_str(&csv)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows: Vec<String> = std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0.0,4.0,1.0,2.5,0.0,0.0,0.0,"));
}

#[test]
fn match_reports_infeasible_injection() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("leak.json");
    std::fs::write(
        &file,
        r#"{
  "name": "leak",
  "graph": {"n": 2, "edges": [[0, 1]]},
  "constraints": null,
  "hamiltonian": {"kind": "quadratic"},
  "controller": {"kind": "PI", "gains": [1.0]},
  "disturbance": {"E": [[1.0], [0.0]], "d": [0.5]},
  "x0": [0.0, 0.0],
  "xc0": [0.0],
  "integrator": {"step": 0.01, "horizon": 1.0, "stride": 10}
}"#,
    )
    .unwrap();
    let out = flownet(&["match", path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["feasible"], false);

    let out = flownet(&["match", path_str(&scenario("bidirectional.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["feasible"], true);
}

#[test]
fn counterexample_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    std::fs::write(
        &graph,
        r#"{"n": 3, "edges": [[0, 1], [1, 2], [2, 0], [0, 2]]}"#,
    )
    .unwrap();
    let ce = dir.path().join("ce.json");
    let out = flownet(&["counterexample", path_str(&graph), "-o", path_str(&ce)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&flownet(&["simulate", path_str(&ce)]));
    assert_eq!(r["steady"], true);
    assert_eq!(r["consensus"], false);

    let out = flownet(&["counterexample", path_str(&scenario("triangle.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn preset_matches_shipped_file() {
    let out = flownet(&["preset"]);
    assert!(out.status.success());
    let shipped = std::fs::read(scenario("five_vertex.json")).unwrap();
    assert_eq!(out.stdout, shipped);
}

#[test]
fn verify_exit_codes() {
    let out = flownet(&["verify", "--suite", "conservation"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("[PASS]"));
    assert_eq!(
        flownet(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_and_load_errors_exit_2() {
    assert_eq!(flownet(&["analyze", "--bogus", "x"]).status.code(), Some(2));
    let out = flownet(&["analyze", "/nonexistent/s.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/s.json"));
}

#[test]
fn consensus_tolerance_from_environment() {
    // the preset ends with a spread above 0.1, so a loose tolerance reports consensus
    let path = scenario("five_vertex.json");
    let strict = json(&flownet(&["simulate", path_str(&path)]));
    assert_eq!(strict["consensus"], false);
    let out = Command::new(env!("CARGO_BIN_EXE_flownet"))
        .args(["simulate", path_str(&path)])
        .env("FLOWNET_TOL_CONSENSUS", "10")
        .output()
        .unwrap();
    assert_eq!(json(&out)["consensus"], true);
    let out = Command::new(env!("CARGO_BIN_EXE_flownet"))
        .args(["simulate", path_str(&path)])
        .env("FLOWNET_TOL_CONSENSUS", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
