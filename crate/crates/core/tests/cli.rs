//! End-to-end tests of the `eurlab` binary: exit codes, output formats,
//! config-file merging, and scan determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn eurlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eurlab"))
        .args(args)
        .env_remove("EURLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("eurlab_cli_it");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_prints_reference_line_and_detects() {
    let output = eurlab(&[
        "check",
        "--family",
        "bell",
        "--criteria",
        "prop1",
        "--bases",
        "Z,X,Y",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output)
        .contains("prop1: lhs 3.000000000 threshold 4.000000000 VIOLATED"));

    let output = eurlab(&[
        "check",
        "--family",
        "bell",
        "--criteria",
        "prop1",
        "--fail-on-detect",
    ]);
    assert_eq!(output.status.code(), Some(2), "detection must exit 2");

    let output = eurlab(&[
        "check",
        "--family",
        "w",
        "--l0",
        "1",
        "--l2",
        "0",
        "--criteria",
        "prop3",
        "--fail-on-detect",
    ]);
    assert_eq!(output.status.code(), Some(0), "product state: no detection");
    assert!(stdout(&output).contains("SATISFIED"));
}

#[test]
fn check_json_is_machine_readable() {
    let output = eurlab(&[
        "check",
        "--family",
        "ghz",
        "--l0",
        "0.707106781",
        "--criteria",
        "prop6,steer_a_to_b",
        "--json",
    ]);
    assert_eq!(output.status.code(), Some(1), "prop6 needs 3 sites, steering needs 2");

    let output = eurlab(&[
        "check",
        "--family",
        "ghz",
        "--l0",
        "0.707106781",
        "--criteria",
        "prop6",
        "--json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let entry = &parsed.as_array().unwrap()[0];
    assert_eq!(entry["criterion"], "prop6");
    assert_eq!(entry["verdict"], "satisfied");
    assert!((entry["lhs"].as_f64().unwrap() - 6.0).abs() < 1e-9);
}

#[test]
fn qudit_family_check_with_fourier_criterion() {
    let output = eurlab(&[
        "check",
        "--family",
        "qudit",
        "--lambdas",
        "0.6,0.48,0.64",
        "--criteria",
        "qudit",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("VIOLATED"));
}

#[test]
fn usage_and_config_errors_exit_1() {
    let output = eurlab(&["check", "--family", "nosuch", "--criteria", "prop1"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("nosuch"));

    // Missing family parameter names the field.
    let output = eurlab(&["check", "--family", "eps", "--criteria", "prop1"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("`eps`"));

    let output = eurlab(&["scan", "--scan-id", "bogus", "--out", "/tmp/x.csv"]);
    assert_eq!(output.status.code(), Some(1));

    let output = eurlab(&["no-such-subcommand"]);
    assert_eq!(output.status.code(), Some(1));

    // Unwritable output path.
    let output = eurlab(&[
        "scan",
        "--scan-id",
        "ghz",
        "--steps",
        "2",
        "--out",
        "/proc/eurlab/denied.csv",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let output = eurlab(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for sub in ["check", "scan", "bound", "minimize", "verify-csv"] {
        assert!(text.contains(sub), "help must list `{sub}`");
    }
}

#[test]
fn bound_command_matches_registry() {
    let output = eurlab(&["bound", "--d", "3", "--mubs", "4"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "4.000000000 tight registry_qutrit4");

    let output = eurlab(&["bound", "--d", "2", "--bases", "Z,X"]);
    assert_eq!(stdout(&output).trim(), "1.000000000 tight maassen_uffink");

    // Unsupported dimension for MUB construction names the limitation.
    let output = eurlab(&["bound", "--d", "6", "--mubs", "3"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("prime"));
}

#[test]
fn minimize_reproduces_qutrit_registry_minimum() {
    let output = eurlab(&[
        "minimize",
        "--d",
        "3",
        "--mubs",
        "3",
        "--restarts",
        "64",
        "--seed",
        "7",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    let min_line = text
        .lines()
        .find(|l| l.starts_with("min_found"))
        .expect("min_found line");
    let value: f64 = min_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((value - 3.0).abs() < 1e-3, "min_found {value}");
    assert!(text.contains("reference 3.000000000"));
    assert!(text.contains("argmin ["));
}

#[test]
fn scans_are_byte_identical_and_verify() {
    let first = temp_path("scan_a.csv");
    let second = temp_path("scan_b.csv");
    for path in [&first, &second] {
        let output = eurlab(&[
            "scan",
            "--scan-id",
            "eps_family",
            "--steps",
            "25",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    let a = fs::read(&first).unwrap();
    let b = fs::read(&second).unwrap();
    assert_eq!(a, b, "identical config + seed must give identical bytes");

    let output = eurlab(&["verify-csv", first.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("consistent"));
}

#[test]
fn verify_csv_catches_tampering() {
    let path = temp_path("tampered.csv");
    let output = eurlab(&[
        "scan",
        "--scan-id",
        "ghz",
        "--steps",
        "5",
        "--criteria",
        "multi_ent2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));

    let text = fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("violated", "satisfied", 1);
    assert_ne!(text, tampered, "expected a violated verdict to tamper with");
    fs::write(&path, tampered).unwrap();

    let output = eurlab(&["verify-csv", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("inconsistent"));
}

#[test]
fn w_plane_scan_marks_infeasible_rows() {
    let path = temp_path("w_small.csv");
    let output = eurlab(&[
        "scan",
        "--scan-id",
        "w_plane",
        "--steps",
        "9",
        "--criteria",
        "multi_ent1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("infeasible"));
    // (0.9)^2 + (0.9)^2 > 1: last grid point must be infeasible.
    let last = text.lines().last().unwrap();
    assert!(last.contains("infeasible"));

    let output = eurlab(&["verify-csv", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "infeasible rows are skipped");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let config = temp_path("check.conf");
    fs::write(
        &config,
        "family=ghz\nl0=0.707106781\ncriteria=multi_ent2\nbases=Z,X,Y\n",
    )
    .unwrap();

    let output = eurlab(&["check", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("multi_ent2"));
    assert!(stdout(&output).contains("VIOLATED"));

    // Flag overrides the file: l0 = 1 gives the product state |000>,
    // which multi_ent2 does not flag.
    let output = eurlab(&["check", "--config", config.to_str().unwrap(), "--l0", "1"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("SATISFIED"));
}

#[test]
fn thread_cap_env_var_is_honored_and_validated() {
    let path = temp_path("threads.csv");
    let output = Command::new(env!("CARGO_BIN_EXE_eurlab"))
        .args([
            "scan",
            "--scan-id",
            "ghz",
            "--steps",
            "5",
            "--out",
            path.to_str().unwrap(),
        ])
        .env("EURLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));

    let output = Command::new(env!("CARGO_BIN_EXE_eurlab"))
        .args([
            "scan",
            "--scan-id",
            "ghz",
            "--steps",
            "5",
            "--out",
            path.to_str().unwrap(),
        ])
        .env("EURLAB_THREADS", "banana")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn custom_scan_uses_explicit_grid() {
    let path = temp_path("custom.csv");
    let output = eurlab(&[
        "scan",
        "--scan-id",
        "custom",
        "--family",
        "eps",
        "--grid",
        "eps=0.4:0.6:5",
        "--criteria",
        "criterio3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let (header, rows) = {
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
        let rows: Vec<Vec<String>> = lines
            .map(|l| l.split(',').map(String::from).collect())
            .collect();
        (header, rows)
    };
    assert_eq!(header[0], "eps");
    assert_eq!(rows.len(), 5);
    // Interior points of (0.4, 0.6): first is 0.4 + 0.2/6, printed with
    // 9 significant digits.
    let first: f64 = rows[0][0].parse().unwrap();
    assert!((first - (0.4 + 0.2 / 6.0)).abs() < 1e-8);
}
