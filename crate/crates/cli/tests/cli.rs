//! Behavior tests of the installed binary: flag handling, output schemas,
//! exit codes, and config-file precedence.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singlet-filter"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn sweep_csv_schema() {
    let text = stdout(&["sweep", "--order", "1"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# theta in radians");
    assert_eq!(
        lines.next().unwrap(),
        "theta_rad,E_theory,E_degraded,E_mc,sigma_mc"
    );
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("theta_rad"))
        .collect();
    assert_eq!(rows.len(), 25);
    // exact mode leaves the Monte-Carlo cells empty
    for row in &rows {
        assert!(row.ends_with(",,"), "row {row}");
        assert_eq!(row.split(',').count(), 5);
    }
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("# fit: amplitude="));
}

#[test]
fn default_sweep_follows_the_singlet_curve() {
    let text = stdout(&["sweep", "--order", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["command"], "sweep");
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 25);
    for row in rows {
        let theta = row["theta_rad"].as_f64().unwrap();
        let e = row["e_theory"].as_f64().unwrap();
        let expected = -(theta - std::f64::consts::FRAC_PI_2).cos();
        assert!((e - expected).abs() < 1e-10);
        assert!(row["e_mc"].is_null());
    }
    let fit = value["fit"]["amplitude"].as_f64().unwrap();
    assert!((fit - 1.0).abs() < 1e-9);
}

#[test]
fn json_numbers_carry_twelve_significant_digits() {
    let text = stdout(&["sweep", "--order", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let theta = value["rows"][1]["theta_rad"].as_f64().unwrap();
    // 2*pi/25 rounded to 12 significant digits
    assert_eq!(theta, 0.251327412287);
}

#[test]
fn explicit_visibility_fixes_fit_amplitude() {
    let text = stdout(&[
        "sweep",
        "--order",
        "3",
        "--visibility",
        "v=0.838",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let amplitude = value["fit"]["amplitude"].as_f64().unwrap();
    assert!((amplitude - 0.838).abs() < 1e-9);
}

#[test]
fn spectral_visibility_reproduces_bandwidth_bound() {
    let text = stdout(&[
        "sweep",
        "--order",
        "2",
        "--visibility",
        "r=0.76",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let amplitude = value["fit"]["amplitude"].as_f64().unwrap();
    assert!((amplitude - 0.93).abs() < 0.005);
}

#[test]
fn witness_reports_ideal_indicators() {
    let text = stdout(&["witness", "--order", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let report = &value["report"];
    assert!((report["indicator"].as_f64().unwrap() - 3.0).abs() < 1e-10);
    assert!((report["bell_value"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert!(report["sigmas_violated"].is_null());
}

#[test]
fn state_dump_lists_singlet() {
    let text = stdout(&["state-dump", "--order", "1"]);
    assert!(text.contains("ket,re,im"));
    assert!(text.contains("HV,7.07106781187e-1"));
    assert!(text.contains("VH,-7.07106781187e-1"));
    assert!(text.contains("reference=psi2 fidelity=1.00000000000e0"));
}

#[test]
fn vis_table_contains_experimental_ratio() {
    let text = stdout(&["vis-table", "--r-values", "0,0.76"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,v4_temp,v6_temp");
    assert!(lines[1].starts_with("0.00000000000e0,1.00000000000e0,1.00000000000e0"));
    assert!(lines[2].starts_with("7.60000000000e-1,9.30565380502e-1,8.95977956947e-1"));
}

#[test]
fn config_error_exits_with_two() {
    for args in [
        vec!["sweep", "--order", "5"],
        vec!["sweep", "--order", "1", "--theta", "b=0.3"], // swept mode fixed
        vec!["sweep", "--order", "1", "--modes", "b,d,e"],
        vec!["sweep", "--order", "1", "--modes", "b,q"],
        vec!["sweep", "--visibility", "v=2.0"],
        vec!["sweep", "--split-a0", "1,0,0.5"],
        vec!["vis-table", "--r-values", "-0.5"],
        vec!["definitely-not-a-command"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn zero_probability_selection_exits_with_three() {
    // Three a-side modes can never hold two photons one-per-mode at order 2.
    let out = run(&["sweep", "--order", "2", "--modes", "a,b,c,d"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("zero-probability"), "stderr: {err}");
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let args = ["sweep", "--order", "1", "--shots", "2000", "--seed", "7"];
    let first = stdout(&args);
    let second = stdout(&args);
    assert_eq!(first, second);
    // and a different seed changes the sampled columns
    let other = stdout(&["sweep", "--order", "1", "--shots", "2000", "--seed", "8"]);
    assert_ne!(first, other);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join("table.csv");
    let out = run(&[
        "vis-table",
        "--r-values",
        "0.76",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("r,v4_temp,v6_temp"));
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# defaults for the four-photon runs\norder=2\nshots=5\nseed=3\ntheta_d=0.25\n",
    )
    .unwrap();

    // File alone: order 2 with its default modes.
    let text = stdout(&[
        "state-dump",
        "--config",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["config"]["order"], 2);
    assert_eq!(value["report"]["reference"], "psi4");

    // Flag beats file.
    let text = stdout(&[
        "state-dump",
        "--config",
        path.to_str().unwrap(),
        "--order",
        "1",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["config"]["order"], 1);
    assert_eq!(value["config"]["thetas"]["d"], 0.25);

    // Unknown keys are configuration errors.
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "orderr=2\n").unwrap();
    let out = run(&["state-dump", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symmetric_splits_change_probability_not_state() {
    let cascade = stdout(&["state-dump", "--order", "3", "--format", "json"]);
    let symmetric = stdout(&[
        "state-dump",
        "--order",
        "3",
        "--split-a0",
        "0.5773502691896258,0.5773502691896258,0.5773502691896258",
        "--split-b0",
        "0.5773502691896258,0.5773502691896258,0.5773502691896258",
        "--format",
        "json",
    ]);
    let a: serde_json::Value = serde_json::from_str(&cascade).unwrap();
    let b: serde_json::Value = serde_json::from_str(&symmetric).unwrap();
    assert_eq!(a["report"]["amplitudes"], b["report"]["amplitudes"]);
    let pa = a["report"]["probability"].as_f64().unwrap();
    let pb = b["report"]["probability"].as_f64().unwrap();
    assert!((pa - pb).abs() > 1e-4);
}
