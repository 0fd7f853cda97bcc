//! End-to-end tests of the `mvq` binary: exit codes, report files, and
//! reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mvq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvq"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).unwrap();
}

#[test]
fn metric_prints_value_and_identity_sigma() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a.json"), r#"{"Q": 2, "points": [[0], [10]]}"#);
    write(&dir.path().join("b.json"), r#"{"Q": 2, "points": [[1], [12]]}"#);
    let out = mvq(&["metric", "a.json", "b.json", "--out", "m"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("value: 2"), "stdout: {stdout}");
    assert!(stdout.contains("sigma: [0, 1]"));
    assert!(stdout.contains("solver: exact"));
    let matching: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m/matching.json")).unwrap())
            .unwrap();
    assert_eq!(matching["value"], 2.0);
    assert_eq!(matching["sigma"], serde_json::json!([0, 1]));
}

#[test]
fn metric_of_equal_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a.json"), r#"{"Q": 2, "points": [[0, 1], [2, 3]]}"#);
    let out = mvq(&["metric", "a.json", "a.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("value: 0"));
}

#[test]
fn metric_rejects_q_mismatch_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a.json"), r#"{"Q": 2, "points": [[0], [10]]}"#);
    write(&dir.path().join("c.json"), r#"{"Q": 1, "points": [[0]]}"#);
    let out = mvq(&["metric", "a.json", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metric_rejects_malformed_json_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("bad.json"), "{nope");
    write(&dir.path().join("a.json"), r#"{"Q": 1, "points": [[0]]}"#);
    let out = mvq(&["metric", "bad.json", "a.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extend_half_angle_passes_and_reports_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &[
            "extend",
            "--fixture",
            "half-angle",
            "--mesh-n",
            "600",
            "--pairs",
            "20000",
            "--out",
            "r",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r/extend_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["q"], 2);
    assert_eq!(report["config"]["seed"], 0);
    assert!(report["version"].is_string());
    // (gamma + 8Q - 6) * lip_used with Q = 2 is 11 * lip_used.
    let bound = report["lip_bound"].as_f64().unwrap();
    let lip_used = report["lip_used"].as_f64().unwrap();
    assert!((bound - 11.0 * lip_used).abs() < 1e-12);
    let csv = fs::read_to_string(dir.path().join("r/extend_pairs.csv")).unwrap();
    assert!(csv.starts_with("i,j,dist,s_value,ratio\n"));
    assert!(csv.lines().count() > 1000);
}

#[test]
fn extend_reports_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["r1", "r2"] {
        let out = mvq(
            &[
                "extend", "--fixture", "identity-circle", "--mesh-n", "400", "--pairs", "5000",
                "--out", name,
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("r1/extend_report.json")).unwrap();
    let b = fs::read(dir.path().join("r2/extend_report.json")).unwrap();
    assert_eq!(a, b);
    let a = fs::read(dir.path().join("r1/extend_pairs.csv")).unwrap();
    let b = fs::read(dir.path().join("r2/extend_pairs.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn extend_round_trips_through_an_exported_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &[
            "extend", "--fixture", "half-angle", "--mesh-n", "400", "--pairs", "5000",
            "--export-table", "table.json", "--out", "r1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let out = mvq(
        &[
            "extend", "--input", "table.json", "--mesh-n", "400", "--pairs", "5000", "--out", "r2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r2/extend_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["all_pass"], true);
}

#[test]
fn extend_flags_corrupted_samples_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &[
            "extend", "--fixture", "half-angle", "--mesh-n", "64", "--pairs", "1000",
            "--export-table", "table.json", "--out", "r",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("table.json")).unwrap()).unwrap();
    doc["values"][7]["points"][0] = serde_json::json!([1000.0, 0.0]);
    write(&dir.path().join("corrupt.json"), &doc.to_string());
    let out = mvq(
        &[
            "extend", "--input", "corrupt.json", "--lip", "0.71", "--mesh-n", "64", "--pairs",
            "1000", "--out", "r2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stderr).unwrap().contains("inflate Lip(f)"));
}

#[test]
fn cover_q_two_passes_with_bound_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &["cover", "--q", "2", "--probes", "3000", "--out", "c"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c/cover_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["base_multiplicity"]["value"], 2);
    assert_eq!(report["base_multiplicity"]["exact"], true);
    assert_eq!(report["bound"], 4);
    assert_eq!(report["pass"], true);
    assert_eq!(report["non_vacuous"], true);
    let cover: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c/cover.json")).unwrap())
            .unwrap();
    assert_eq!(cover["members"].as_array().unwrap().len(), 4);
    assert_eq!(cover["members"][0]["kind"], "interval");
    let csv = fs::read_to_string(dir.path().join("c/cover_probes.csv")).unwrap();
    assert!(csv.starts_with("probe,members_met\n"));
    assert_eq!(csv.lines().count(), 3001);
}

#[test]
fn cover_q_one_product_equals_base() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &["cover", "--q", "1", "--probes", "2000", "--out", "c"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c/cover_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["bound"], 2);
    assert_eq!(report["product_members"], report["base_members"]);
}

#[test]
fn cover_overflows_member_cap_with_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &["cover", "--hi", "100000", "--q", "5", "--out", "c"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr).unwrap().contains("coarsen"));
}

#[test]
fn examples_half_angle_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &["examples", "half-angle", "--mesh-n", "600", "--pairs", "20000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("monodromy over 360 steps: [1, 0]"));
    assert!(stdout.contains("-> ok"));
}

#[test]
fn examples_split_pair_has_identity_monodromy() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &["examples", "split-pair", "--mesh-n", "400", "--pairs", "10000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("monodromy over 360 steps: [0, 1]"));
}

#[test]
fn examples_constant_has_zero_lipschitz_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(
        &["examples", "constant-3", "--mesh-n", "200", "--pairs", "5000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("Lip(f) estimate: 0"));
}

#[test]
fn examples_unknown_name_lists_gallery_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = mvq(&["examples", "moebius"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    for name in ["constant-3", "half-angle", "identity-circle", "split-pair"] {
        assert!(stderr.contains(name), "missing {name} in: {stderr}");
    }
}
