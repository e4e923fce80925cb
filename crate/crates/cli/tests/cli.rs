//! End-to-end tests of the `lfdd` binary: artifact layout, exit codes,
//! override plumbing, and output determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

static DIR_COUNTER: AtomicUsize = AtomicUsize::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let id = DIR_COUNTER.fetch_add(1, Ordering::SeqCst);
    let dir = std::env::temp_dir().join(format!("lfdd-cli-test-{}-{tag}-{id}", std::process::id()));
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn lfdd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfdd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &std::path::Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const OSC_CONFIG: &str = r#"{
  "grid": {"x_left": 0.0, "x_right": 3.141592653589793, "n_nodes": 41},
  "scenario": "oscillating_shear",
  "scenario_params": {"mu": 0.5, "rho": 1.0, "u0": 1.0, "p": 1}
}"#;

const EIGEN_CONFIG: &str = r#"{
  "grid": {"x_left": 0.0, "x_right": 1.0, "n_nodes": 31},
  "material": {"rho": 1.0, "lambda": 0.0, "mu": 1.0},
  "bc": {"left": "clamped", "right": "clamped"},
  "alpha": {"kind": "screw", "magnitude": 1.0}
}"#;

#[test]
fn scenarios_command_lists_presets() {
    let out = lfdd(&["scenarios"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for name in [
        "static_uniaxial",
        "oscillating_shear",
        "dissipative_homogeneous",
    ] {
        assert!(stdout.contains(name), "missing {name} in listing");
    }
}

#[test]
fn simulate_writes_artifacts_and_is_deterministic() {
    let dir = scratch_dir("simulate");
    let config = write_config(&dir, "osc.json", OSC_CONFIG);
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out_dir in [&out_a, &out_b] {
        let out = lfdd(&[
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--set",
            "simulate.snapshot_every=20",
            "--set",
            "grid.n_nodes=41",
        ]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("energy initial"));
        assert!(stdout.contains("max constraint residual"));
    }
    let record_a = fs::read(out_a.join("record.csv")).unwrap();
    let record_b = fs::read(out_b.join("record.csv")).unwrap();
    assert_eq!(record_a, record_b, "repeated runs must be byte-identical");
    assert!(out_a.join("snapshot_20.csv").exists());
    // the override shows up in the echoed effective config
    let effective: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("effective_config.json")).unwrap())
            .unwrap();
    assert_eq!(effective["config"]["simulate"]["snapshot_every"], 20);
    assert_eq!(effective["config"]["grid"]["n_nodes"], 41);
    assert_eq!(effective["resolved"]["scenario"], "oscillating_shear");
}

#[test]
fn simulate_json_format_embeds_effective_config() {
    let dir = scratch_dir("json");
    let config = write_config(&dir, "osc.json", OSC_CONFIG);
    let out_dir = dir.join("out");
    let out = lfdd(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("record.json")).unwrap()).unwrap();
    assert!(doc["summary"]["energy_initial"].as_f64().unwrap() > 0.0);
    assert_eq!(
        doc["effective_config"]["resolved"]["scenario"],
        "oscillating_shear"
    );
    assert!(!out_dir.join("record.csv").exists());
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let dir = scratch_dir("malformed");
    let config = write_config(&dir, "bad.json", "{ not json");
    let out_dir = dir.join("out");
    let out = lfdd(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists(), "no artifacts on config errors");
}

#[test]
fn unknown_schema_field_exits_2() {
    let dir = scratch_dir("schema");
    let config = write_config(
        &dir,
        "typo.json",
        r#"{"scenario": "oscillating_shear", "grd": {"n_nodes": 41}}"#,
    );
    let out = lfdd(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("grd"),
        "error names the offending field: {stderr}"
    );
}

#[test]
fn unknown_scenario_exits_2() {
    let dir = scratch_dir("name");
    let config = write_config(&dir, "s.json", r#"{"scenario": "warp_drive"}"#);
    let out = lfdd(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cfl_violation_exits_2() {
    let dir = scratch_dir("cfl");
    let config = write_config(&dir, "osc.json", OSC_CONFIG);
    let out = lfdd(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--set",
        "simulate.dt=1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("CFL"), "{stderr}");
}

#[test]
fn unstable_run_exits_3() {
    let dir = scratch_dir("blowup");
    let config = write_config(&dir, "osc.json", OSC_CONFIG);
    let out_dir = dir.join("out");
    // lift the CFL guard, then step far beyond the stability limit
    let out = lfdd(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--set",
        "simulate.cfl_safety=1000.0",
        "--set",
        "simulate.dt=0.5",
        "--set",
        "simulate.t_end=100.0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("non-finite"), "{stderr}");
}

#[test]
fn eigen_writes_mode_table_and_warns_on_degeneracy() {
    let dir = scratch_dir("eigen");
    let config = write_config(&dir, "eigen.json", EIGEN_CONFIG);
    let out_dir = dir.join("out");
    let out = lfdd(&[
        "eigen",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    // isotropic transverse branches are degenerate
    assert!(stdout.contains("warning: repeated eigenvalues"));
    assert!(stdout.contains("case1"));
    assert!(stdout.contains("case2"));
    let table = fs::read_to_string(out_dir.join("modes.csv")).unwrap();
    assert!(table.starts_with("p,frequency,residual,label"));
    assert!(table.contains("case1"));
    assert!(table.contains("case2"));
}

#[test]
fn eigen_rejects_tiny_grid() {
    let dir = scratch_dir("eigen-small");
    let config = write_config(&dir, "eigen.json", EIGEN_CONFIG);
    let out = lfdd(&[
        "eigen",
        "--config",
        config.to_str().unwrap(),
        "--set",
        "grid.n_nodes=2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_feedback_fails_the_check_suite() {
    let out = Command::new(env!("CARGO_BIN_EXE_lfdd"))
        .args(["check", "--level", "fast"])
        .env("LFDD_FAULT_INJECT", "corrupt_b")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL dissipation_identity"), "{stdout}");
    assert!(stdout.contains("FAIL b_minor_symmetry"), "{stdout}");
}
