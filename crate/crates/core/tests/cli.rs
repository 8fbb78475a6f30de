use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entangle-teleport"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// (header, rows) of a CSV emission, comments skipped.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "--grid-step", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--seeds", "0"]).status.code(), Some(2));
    assert_eq!(run(&["fig2", "--e12-steps", "1"]).status.code(), Some(2));
    assert_eq!(run(&["fidelity", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["fig3", "--e46", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_reports_every_check() {
    let out = run(&["verify", "--grid-step", "0.25", "--seeds", "5"]);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["check", "samples", "max_deviation", "tolerance", "status"]);
    let failed: Vec<&str> = rows.iter().filter(|r| r[4] == "fail").map(|r| r[0].as_str()).collect();
    // only the published intermediate-state relation disagrees with the simulation
    assert_eq!(failed, ["intermediate_correlation_published", "intermediate_quadratic_published"]);
    for r in rows.iter().filter(|r| r[4] == "pass") {
        assert!(num(&r[2]) < 1e-9, "{r:?}");
    }
    assert_eq!(out.status.code(), Some(if failed.is_empty() { 0 } else { 1 }));
}

#[test]
fn verify_with_impossible_tolerance_fails() {
    let out = run(&["verify", "--grid-step", "0.5", "--seeds", "2", "--tol", "1e-16"]);
    assert_eq!(out.status.code(), Some(1));
    let (_, rows) = parse_csv(&stdout(&out));
    assert!(rows.iter().any(|r| r[0] == "fidelity_law" && r[4] == "fail"));
}

#[test]
fn fig2_corners_and_schema() {
    let out = run(&["fig2", "--e12-steps", "11", "--ew-steps", "11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "# seed: 42"));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["e12", "ew", "e78_formula", "e78_oracle", "deviation"]);
    assert_eq!(rows.len(), 121);
    for r in &rows {
        assert_eq!(r.len(), 5);
        assert!(num(&r[4]) < 1e-9);
        if num(&r[0]) == 0.0 {
            assert_eq!(num(&r[2]), 0.0);
            assert!(num(&r[3]) < 1e-12);
        }
    }
    let last = rows.last().unwrap();
    assert_eq!((num(&last[0]), num(&last[1])), (1.0, 1.0));
    assert!((num(&last[3]) - 1.0).abs() < 1e-10);
}

#[test]
fn fig2_near_critical_channel() {
    // ew = 0.366 sits on the separability edge for a maximally entangled input
    let out = run(&["fig2", "--e12-steps", "2", "--ew-steps", "1001"]);
    let (_, rows) = parse_csv(&stdout(&out));
    let row = rows.iter().find(|r| num(&r[0]) == 1.0 && (num(&r[1]) - 0.366).abs() < 1e-12).unwrap();
    assert!(num(&row[3]) < 1e-4);
}

#[test]
fn fidelity_and_info_examples() {
    let (_, rows) = parse_csv(&stdout(&run(&["fidelity"])));
    let first = &rows[0];
    assert!((num(&first[3]) - 4.0 / 9.0).abs() < 1e-10);
    for r in rows.iter().filter(|r| num(&r[1]) == 1.0) {
        assert!((num(&r[3]) - 1.0).abs() < 1e-10);
    }

    let (header, rows) = parse_csv(&stdout(&run(&["info"])));
    assert_eq!(header, ["e12", "ew", "ic12", "ic78_formula", "ic78_oracle", "deviation"]);
    let r = rows.iter().find(|r| num(&r[0]) == 1.0 && num(&r[1]) == 0.0).unwrap();
    assert!((num(&r[2]) - 2.0).abs() < 1e-10);
    assert!((num(&r[4]) - 2.0 / 81.0).abs() < 1e-10);
}

#[test]
fn fig3_purity_threshold() {
    let out = run(&["fig3", "--density", "120", "--targets", "0.16,0.18", "--target-tol", "0.004"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["e72_target", "theta", "ew1", "e72", "p72", "e46", "e78", "status"]);
    for target in ["0.160000000000", "0.180000000000"] {
        let curve: Vec<(f64, f64)> = rows.iter().filter(|r| r[0] == target).map(|r| (num(&r[4]), num(&r[6]))).collect();
        assert!(curve.len() > 10, "{target}");
        assert!(curve.windows(2).all(|w| w[0].0 <= w[1].0), "sorted by p72");
        // separable replica at low purity, entangled at high purity
        assert_eq!(curve.first().unwrap().1, 0.0);
        assert!(curve.last().unwrap().1 > 0.0);
    }
}

#[test]
fn fig3_empty_bin_is_a_warning_row() {
    let out = run(&["fig3", "--density", "20", "--targets", "0.5", "--target-tol", "1e-9"]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].len(), 8);
    assert_eq!(rows[0][7], "empty");
}

#[test]
fn fig3_perfect_first_channel() {
    let out = run(&["fig3", "--density", "11", "--targets", "1.0", "--target-tol", "1e-9"]);
    let (_, rows) = parse_csv(&stdout(&out));
    let r = &rows[0];
    assert!((num(&r[1]) - std::f64::consts::FRAC_PI_4).abs() < 1e-11);
    assert_eq!(num(&r[2]), 1.0);
    assert!((num(&r[4]) - 1.0).abs() < 1e-10);
}

#[test]
fn output_is_byte_deterministic() {
    let dir = tempdir();
    for cmd in [&["fig2", "--e12-steps", "9", "--ew-steps", "7"][..], &["fig3", "--density", "40"][..]] {
        let a = dir.join("a.out");
        let b = dir.join("b.out");
        for p in [&a, &b] {
            let mut args: Vec<&str> = cmd.to_vec();
            args.extend(["--seed", "7", "--out", p.to_str().unwrap()]);
            assert!(run(&args).status.success());
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn csv_and_json_carry_identical_values() {
    for cmd in ["fig2", "info", "fidelity"] {
        let args = [cmd, "--e12-steps", "5", "--ew-steps", "4"];
        let (header, rows) = parse_csv(&stdout(&run(&args)));
        let mut json_args = args.to_vec();
        json_args.extend(["--format", "json"]);
        let json: Value = serde_json::from_str(&stdout(&run(&json_args))).unwrap();
        assert_eq!(json["meta"]["seed"], "42");
        let jrows = json["rows"].as_array().unwrap();
        assert_eq!(jrows.len(), rows.len());
        for (csv_row, jrow) in rows.iter().zip(jrows) {
            for (col, cell) in header.iter().zip(csv_row) {
                assert_eq!(jrow[col].as_f64().unwrap(), num(cell), "{cmd} {col}");
            }
        }
    }
}

fn tempdir() -> std::path::PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
