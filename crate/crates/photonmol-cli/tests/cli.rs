//! End-to-end tests of the `photonmol` binary: exit codes, JSON output
//! shapes, file artifacts and unit conversion. Each invocation keeps the
//! numerics small (fixed cutoffs, few-point weak-drive sweeps) so the whole
//! target stays fast; the heavy solver validation lives in the library's
//! acceptance suite and behind the `validate` subcommand.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_photonmol"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn test_steady_default_reports_baseline() {
    let out = run(&["steady", "--tol", "0"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v = stdout_json(&out);
    let g2 = v["g2_a"].as_f64().unwrap();
    let n_a = v["n_a"].as_f64().unwrap();
    assert!((g2 - 4.1719022948748854e-4).abs() < 1e-9 * g2);
    assert!((n_a - 5.757817e-3).abs() < 1e-8);
    assert_eq!(v["cutoff_used"][0].as_u64(), Some(6));
    assert_eq!(v["converged"], serde_json::json!(true));
}

#[test]
fn test_steady_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "steady",
        "--engine",
        "weakdrive",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let on_disk: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(on_disk, stdout_json(&out));
}

#[test]
fn test_steady_undriven_is_runtime_error() {
    let out = run(&["steady", "--e-a", "0", "--e-b", "0", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no photons"), "stderr: {}", stderr(&out));
}

#[test]
fn test_steady_invalid_param_is_usage_error() {
    let out = run(&["steady", "--g", "-1"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn test_unknown_figure_is_usage_error() {
    let out = run(&["figure", "fig9x"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("unknown figure preset"), "stderr: {err}");
    assert!(err.contains("fig2a"), "should list valid names: {err}");
}

#[test]
fn test_sweep_malformed_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\"base\": {,}").unwrap();
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "stderr: {}", stderr(&out));
}

#[test]
fn test_sweep_unknown_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.json");
    std::fs::write(
        &cfg,
        r#"{
  "base": {},
  "axes": [{"param": "delta", "frm": -1.0, "to": 1.0, "points": 3}],
  "engine": "weakdrive"
}"#,
    )
    .unwrap();
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("frm"), "stderr: {}", stderr(&out));
}

#[test]
fn test_optimize_reversed_bounds_is_usage_error() {
    let out = run(&["optimize", "--var", "g", "--from", "2", "--to", "1"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

fn write_tiny_sweep_spec(dir: &Path) -> std::path::PathBuf {
    let cfg = dir.join("spec.json");
    std::fs::write(
        &cfg,
        r#"{
  "base": {"e_a": 0.01, "e_b": 0.0},
  "axes": [{"param": "delta", "from": -1.0, "to": 1.0, "points": 5}],
  "engine": "weakdrive"
}"#,
    )
    .unwrap();
    cfg
}

#[test]
fn test_sweep_writes_csv_and_metadata_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_sweep_spec(dir.path());
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let body = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "delta,g2,n_a,n_b,p_e,converged");
    assert_eq!(lines.len(), 6, "header + 5 rows");
    for row in &lines[1..] {
        assert!(row.ends_with(",true"), "row not converged: {row}");
    }

    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["engine"], serde_json::json!("weakdrive"));
    assert_eq!(meta["axes"][0]["points"].as_u64(), Some(5));
    assert!(!meta["code_version"].as_str().unwrap().is_empty());
    assert!(meta["generated_at"].as_str().is_some());
}

#[test]
fn test_sweep_output_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_sweep_spec(dir.path());
    let mut bodies = Vec::new();
    for workers in ["1", "3"] {
        let csv = dir.path().join(format!("w{workers}.csv"));
        let out = run(&[
            "--workers",
            workers,
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        bodies.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(bodies[0], bodies[1], "CSV bytes differ across pool sizes");
}

#[test]
fn test_paths_reports_two_photon_decomposition() {
    let out = run(&["paths", "--j", "0.9", "--theta", "4.712388980384690"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["basis"].as_array().unwrap().len(), 9);
    assert!(v["g2"].as_f64().unwrap() > 0.0);
}

#[test]
fn test_ghz_config_matches_native_units() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ghz.json");
    std::fs::write(
        &cfg,
        r#"{
  "command": "steady",
  "units": "ghz_over_2pi",
  "kappa_ghz": 16.0,
  "e_a_ghz": 1.0,
  "gamma_ghz": 1.0
}"#,
    )
    .unwrap();
    let ghz = run(&["steady", "--config", cfg.to_str().unwrap(), "--tol", "0"]);
    assert!(ghz.status.success(), "stderr: {}", stderr(&ghz));
    let native = run(&["steady", "--tol", "0"]);
    assert_eq!(stdout_json(&ghz), stdout_json(&native));
}

#[test]
fn test_version_flag() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("photonmol"));
}
