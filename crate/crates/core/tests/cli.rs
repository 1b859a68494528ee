use std::path::Path;
use std::process::{Command, Output};

use sidelink_hmars::harness::{read_csv, COLUMNS};

const SMALL: &str = r#"{"trials": 150, "master_seed": 3, "sweep": {"d0D_over_R": [0.6, 1.4], "d0T_over_R": [2.0, 3.0], "r_e": [0.0, 10.0]}}"#;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidelink-hmars"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn sweep_dd_writes_parseable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = dir.path().join("dd.csv");
    let o = cli(&[
        "sweep-dd",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
    let records = read_csv(text.as_bytes(), "dd.csv").unwrap();
    assert_eq!(records.len(), 2);
    for r in &records {
        assert_eq!(r.trials, 150);
        assert_eq!(r.d0t_over_r, 3.0);
        assert!((0.0..=1.0).contains(&r.noma_duty_cycle));
        assert!(r.se_bfs_oma >= 0.0 && r.se_bfs_noma >= 0.0 && r.se_hmars >= 0.0);
    }
}

#[test]
fn grid_commands_cover_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    for sub in ["duty-cycle", "sweep-dt"] {
        let o = cli(&[sub, "--config", &config]);
        assert!(o.status.success());
        let records = read_csv(o.stdout.as_slice(), sub).unwrap();
        assert_eq!(records.len(), 2 * 2 * 2);
    }
}

#[test]
fn flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let base = cli(&["sweep-dd", "--config", &config]);
    let reseeded = cli(&["sweep-dd", "--config", &config, "--seed", "4"]);
    let fewer = cli(&[
        "sweep-dd",
        "--config",
        &config,
        "--trials",
        "20",
        "--with-stderr",
    ]);
    let printed = cli(&[
        "sweep-dd",
        "--config",
        &config,
        "--convention",
        "as-printed",
    ]);
    assert_ne!(base.stdout, reseeded.stdout);
    let records = read_csv(fewer.stdout.as_slice(), "stdout").unwrap();
    assert!(records
        .iter()
        .all(|r| r.trials == 20 && r.stderr_hmars > 0.0));
    let duty = read_csv(printed.stdout.as_slice(), "stdout").unwrap();
    assert!(duty.iter().all(|r| r.noma_duty_cycle > 0.0));
}

#[test]
fn serial_and_parallel_output_match() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let a = cli(&["sweep-dt", "--config", &config]);
    let b = cli(&["sweep-dt", "--config", &config, "--serial"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_configuration_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        r#"{"trials": 0}"#,
        r#"{"unknown": 1}"#,
        "{",
        r#"{"scenario": {"radius": -1.0}}"#,
    ] {
        let config = write_config(dir.path(), text);
        let o = cli(&["sweep-dd", "--config", &config]);
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
    assert_eq!(
        cli(&["sweep-dd", "--config", "/nonexistent/config.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(&["sweep-dd", "--convention", "sideways"]).status.code(),
        Some(2)
    );
    assert_eq!(cli(&["sweep-dd", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_one() {
    let o = cli(&[
        "sweep-dd",
        "--trials",
        "5",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/out.csv"));
}

#[test]
fn validate_passes_and_reports_every_check() {
    let o = cli(&["validate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("check,measured,tolerance,passed\n"));
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}
