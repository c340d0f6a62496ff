//! End-to-end checks of the `lizard-kin` binary: output contracts, exit
//! codes, and byte-stable reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lizard-kin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

#[test]
fn dof_prints_the_mobility_table() {
    let out = run(&["dof"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "mechanism,links,joints,dof\nchassis-assembly,13,16,4\nleg-four-bar,4,4,1\n"
    );
}

#[test]
fn synth_prints_the_dimensioned_design() {
    let out = run(&["synth", "--r1", "0.3", "--r2", "0.5", "--r3", "0.1", "--r3-mm", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in [
        "d_mm = 100.000000",
        "l0_mm = 20.0000000",
        "l1_mm = 30.0000000",
        "l2_mm = 50.0000000",
        "r_mic_nondim = 0.300000000",
        "y_mic_mm = 48.9897949",
    ] {
        assert!(text.contains(line), "missing {line:?} in:\n{text}");
    }
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    // Geometry: r3 violates its admissible range.
    let out = run(&["synth", "--r1", "0.2", "--r2", "0.2", "--r3", "0.5", "--r3-mm", "10"]);
    assert_eq!(out.status.code(), Some(3));
    // Kinematic: target beyond all reach.
    let out = run(&["ik", "--x", "0", "--y", "500"]);
    assert_eq!(out.status.code(), Some(4));
    // Input: scan axis outside the actuator range.
    let out = run(&["singularity-scan", "--a1", "0:180:5"]);
    assert_eq!(out.status.code(), Some(2));
    // Input: malformed config file.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "l0 = 20\n").unwrap();
    let out = run(&["dof", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Geometry: config parses but describes an impossible robot.
    let neg = dir.path().join("neg.cfg");
    std::fs::write(&neg, "[links]\nl1 = -5\n").unwrap();
    let out = run(&["fk", "--a1", "90", "--a2", "90", "--a3", "-90", "--a4", "-90", "--config", neg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    // Input: command outside the joint range.
    let out = run(&["fk", "--a1", "170", "--a2", "90", "--a3", "-90", "--a4", "-90"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fk_and_ik_agree_through_the_binary() {
    let out = run(&["fk", "--a1", "90", "--a2", "90", "--a3", "-90", "--a4", "-90", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let head_y = v["head_y_mm"].as_f64().unwrap();
    assert!((head_y - 146.4897948556636).abs() < 1e-9);
    assert_eq!(v["singular"].as_f64().unwrap(), 0.0);
    assert!((v["t2_deg"].as_f64().unwrap() - 78.46304096718453).abs() < 1e-9);
    assert!((v["s_left_mm"].as_f64().unwrap() - 135.0).abs() < 1e-9);

    // Feed the head endpoint (head frame: chassis y minus the mount offset)
    // back through ik and recover the neutral cranks.
    let out = run(&["ik", "--x", "0", "--y", &format!("{}", head_y - 67.5), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["t1_deg"].as_f64().unwrap() - 90.0).abs() < 1e-9);
    assert!((v["t4_deg"].as_f64().unwrap() - 90.0).abs() < 1e-9);
}

#[test]
fn chart_rows_cover_the_grid_and_reruns_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "chart", "--kind", "workspace", "--grid", "-80:80:21,0:80:11",
        "--out", dir.path().to_str().unwrap(),
    ];
    let out = run(&args);
    assert!(out.status.success());
    let csv = read(dir.path(), "chart_workspace_head.csv");
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines[0], "x_mm,y_mm,in_workspace");
    assert_eq!(lines.len(), 1 + 21 * 11);

    let report1 = stdout(&out);
    let out2 = run(&args);
    assert_eq!(report1, stdout(&out2));
    assert_eq!(csv, read(dir.path(), "chart_workspace_head.csv"));
}

#[test]
fn lci_chart_reports_the_inscribed_circle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "chart", "--kind", "lci", "--grid", "-50:50:11,20:70:11",
        "--out", dir.path().to_str().unwrap(), "--svg",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["invariants"]["r_mic_mm"].as_f64().unwrap() - 30.0).abs() < 1e-9);
    assert!((v["invariants"]["y_mic_mm"].as_f64().unwrap() - 48.98979485566356).abs() < 1e-9);
    let median = v["invariants"]["median_lci"].as_f64().unwrap();
    assert!(median > 0.0 && median <= 1.0);
    let svg = read(dir.path(), "chart_lci_head.svg");
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let csv = read(dir.path(), "chart_lci_head.csv");
    assert_eq!(csv.lines().next().unwrap(), "x_mm,y_mm,in_workspace,lci");
}

#[test]
fn gait_rollout_writes_a_clean_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gait", "--kind", "walk", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["invariants"]["samples"].as_u64().unwrap(), 401);
    assert_eq!(v["invariants"]["singular_samples"].as_u64().unwrap(), 0);
    assert!(v["invariants"]["max_loop_residual_mm"].as_f64().unwrap() < 1e-9);

    let csv = read(dir.path(), "gait_walk.csv");
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 1 + 401);
    assert!(lines[0].starts_with("t_s,a1_deg") && lines[0].ends_with("singular"));
    for line in &lines[1..] {
        assert!(line.ends_with(",0.00000000"), "singular frame: {line}");
    }
}

#[test]
fn scan_covers_the_axis_product_and_flags_the_fold() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "singularity-scan",
        "--a1", "70:110:3",
        "--a2", "80:100:3",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["invariants"]["rows"].as_u64().unwrap(), 9);
    let csv = read(dir.path(), "singularity_scan.csv");
    assert_eq!(csv.trim_end().lines().count(), 1 + 9);

    // The coupler-fold pose (elbows coincident) must carry the head flag.
    let out = run(&[
        "singularity-scan",
        "--a1", "70.52877936550931",
        "--a2", "109.47122063449069",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["invariants"]["flagged_rows"].as_u64().unwrap(), 1);
    let csv = read(dir.path(), "singularity_scan.csv");
    let row = csv.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[6], "1.00000000", "flag_head in {row}");
}

#[test]
fn config_subcommand_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["config"]);
    assert!(out.status.success());
    let canonical = stdout(&out);
    assert!(canonical.contains("[links]") && canonical.contains("[gait]"));

    let path = dir.path().join("robot.cfg");
    std::fs::write(&path, &canonical).unwrap();
    let out = run(&["config", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), canonical);

    // Overrides survive the round trip in canonical form.
    let edited = canonical.replace("l1 = 30", "l1 = 31.5");
    std::fs::write(&path, &edited).unwrap();
    let out = run(&["config", "--config", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("l1 = 31.5"));
}

#[test]
fn json_tables_mirror_the_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "gait", "--kind", "trot", "--cycles", "1", "--out", dir.path().to_str().unwrap(),
        "--format", "json",
    ]);
    assert!(out.status.success());
    let table: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "gait_trot.json")).unwrap();
    let obj = table.as_object().unwrap();
    assert_eq!(obj.len(), 18);
    assert_eq!(obj["t_s"].as_array().unwrap().len(), 201);
    assert!(obj.contains_key("foot4_y_mm") && obj.contains_key("singular"));
}
