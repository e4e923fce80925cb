//! Command-line front end for the slab simulator.
//!
//! Subcommands: `simulate` (time integration of a scenario preset),
//! `eigen` (limit-system modal analysis), `scenarios` (list presets), and
//! `check` (self-verification suites).
//!
//! Exit codes: 0 success, 1 check failure, 2 configuration error,
//! 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use lfdd_core::checks::{all_passed, run_checks, CheckLevel, FaultInjection};
use lfdd_core::dynamics::{run, DynamicsError, Integrator, SimConfig};
use lfdd_core::grid::{alpha_from_psi, BoundaryCondition, EndCondition, Grid1D, PsiField};
use lfdd_core::report;
use lfdd_core::scenarios::{
    build as build_scenario, list_scenarios, ScenarioError, ScenarioParams,
};
use lfdd_core::spectral::{eigen_analysis, CaseLabel, DEFAULT_CLASSIFY_TOL};
use lfdd_core::tensor::{Material, Tensor2};

#[derive(Parser)]
#[command(
    name = "lfdd",
    about = "Linearized field dislocation dynamics on a 1-D slab",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the monitor record (plus snapshots).
    Simulate {
        /// JSON configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Primary artifact format.
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        /// Override a config field by dotted path, e.g. grid.n_nodes=101.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Solve the limit-system eigenproblem and classify the modes.
    Eigen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List the available scenario presets.
    Scenarios,
    /// Run the self-verification suites.
    Check {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
    },
}

/// Errors mapped onto process exit codes.
enum CliError {
    /// Bad configuration, schema violation, unusable input: exit 2.
    Config(String),
    /// Numerical failure during computation: exit 3.
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) => m,
            CliError::Numerical(m) => m,
        }
    }
}

fn dynamics_error(e: DynamicsError) -> CliError {
    match e {
        DynamicsError::NonFinite { .. }
        | DynamicsError::Linalg(_)
        | DynamicsError::SingularStrainBlock { .. } => CliError::Numerical(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

fn scenario_error(e: ScenarioError) -> CliError {
    match e {
        ScenarioError::OracleDefect { .. } => CliError::Numerical(e.to_string()),
        ScenarioError::Dynamics(d) => dynamics_error(d),
        other => CliError::Config(other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Configuration schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GridBlock {
    x_left: f64,
    x_right: f64,
    n_nodes: usize,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock {
            x_left: 0.0,
            x_right: std::f64::consts::PI,
            n_nodes: 201,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct MaterialBlock {
    rho: f64,
    lambda: f64,
    mu: f64,
}

impl Default for MaterialBlock {
    fn default() -> Self {
        MaterialBlock {
            rho: 1.0,
            lambda: 0.0,
            mu: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct BcBlock {
    left: EndCondition,
    right: EndCondition,
}

impl Default for BcBlock {
    fn default() -> Self {
        BcBlock {
            left: EndCondition::Clamped,
            right: EndCondition::Clamped,
        }
    }
}

/// Base dislocation field selection for the eigen command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
enum AlphaBlock {
    /// α from the potential A(x₁) = slope · x₁ (uniform crossed grid).
    CrossedGrid { slope: f64 },
    /// α = magnitude · e₃⊗e₃, uniform.
    Screw { magnitude: f64 },
    /// No dislocations.
    None,
}

impl Default for AlphaBlock {
    fn default() -> Self {
        AlphaBlock::CrossedGrid { slope: 1.0 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SimulateBlock {
    /// Time step; null picks the scenario default (CFL-safe).
    dt: Option<f64>,
    /// Final time; null picks the scenario default.
    t_end: Option<f64>,
    integrator: Option<Integrator>,
    record_every: Option<usize>,
    snapshot_every: Option<usize>,
    cfl_safety: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct EigenBlock {
    classify_tol: f64,
    /// Dump the shapes of the lowest `dump_modes` modes as snapshot files.
    dump_modes: usize,
}

impl Default for EigenBlock {
    fn default() -> Self {
        EigenBlock {
            classify_tol: DEFAULT_CLASSIFY_TOL,
            dump_modes: 0,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    grid: GridBlock,
    material: MaterialBlock,
    bc: BcBlock,
    alpha: AlphaBlock,
    scenario: Option<String>,
    scenario_params: ScenarioParams,
    simulate: SimulateBlock,
    eigen: EigenBlock,
}

/// Parse the file, apply `--set` overrides on the raw JSON tree, then
/// deserialize against the schema (unknown fields are errors).
fn load_config(path: &Path, overrides: &[String]) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut tree: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    for entry in overrides {
        let (key, raw) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override `{entry}` is not KEY=VALUE")))?;
        let value: Value =
            serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        set_path(&mut tree, key, value)
            .map_err(|e| CliError::Config(format!("override `{entry}`: {e}")))?;
    }
    serde_json::from_value(tree)
        .map_err(|e| CliError::Config(format!("config does not match the schema: {e}")))
}

fn set_path(tree: &mut Value, dotted: &str, value: Value) -> Result<(), String> {
    if dotted.is_empty() {
        return Err("empty override path".to_string());
    }
    let parts: Vec<&str> = dotted.split('.').collect();
    let mut cursor = tree;
    for (depth, part) in parts.iter().enumerate() {
        let map = cursor
            .as_object_mut()
            .ok_or_else(|| format!("`{}` is not an object", parts[..depth].join(".")))?;
        if depth + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        cursor = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("loop returns on the last path segment")
}

fn build_grid(block: &GridBlock) -> Result<Grid1D, CliError> {
    Grid1D::new(block.x_left, block.x_right, block.n_nodes)
        .map_err(|e| CliError::Config(format!("grid: {e}")))
}

fn build_material(block: &MaterialBlock) -> Result<Material, CliError> {
    Material::isotropic(block.rho, block.lambda, block.mu)
        .map_err(|e| CliError::Config(format!("material: {e}")))
}

fn build_alpha(block: &AlphaBlock, grid: &Grid1D) -> Result<Vec<Tensor2>, CliError> {
    match block {
        AlphaBlock::CrossedGrid { slope } => {
            alpha_from_psi(grid, &PsiField::Linear { slope: *slope })
                .map_err(|e| CliError::Config(format!("alpha: {e}")))
        }
        AlphaBlock::Screw { magnitude } => {
            Ok(vec![
                Tensor2::outer([0.0, 0.0, *magnitude], [0.0, 0.0, 1.0]);
                grid.n_nodes
            ])
        }
        AlphaBlock::None => Ok(vec![Tensor2::zero(); grid.n_nodes]),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Effective configuration echoed next to every artifact: the file after
/// overrides, plus the resolved runtime values.
fn effective_config_json(config: &FileConfig, resolved: Value) -> Value {
    serde_json::json!({
        "config": serde_json::to_value(config).expect("config serializes"),
        "resolved": resolved,
    })
}

fn cmd_simulate(
    config_path: &Path,
    out_dir: &Path,
    format: OutputFormat,
    overrides: &[String],
) -> Result<(), CliError> {
    let file = load_config(config_path, overrides)?;
    let grid = build_grid(&file.grid)?;
    let name = file
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::Config("simulate requires a `scenario` name".into()))?;
    let scenario = build_scenario(name, &file.scenario_params, &grid).map_err(scenario_error)?;
    let mut sim: SimConfig = scenario.config.clone();
    if let Some(dt) = file.simulate.dt {
        sim.dt = dt;
    }
    if let Some(t_end) = file.simulate.t_end {
        sim.t_end = t_end;
    }
    if let Some(integrator) = file.simulate.integrator {
        sim.integrator = integrator;
    }
    if let Some(every) = file.simulate.record_every {
        sim.record_every = every;
    }
    if let Some(every) = file.simulate.snapshot_every {
        sim.snapshot_every = every;
    }
    if let Some(safety) = file.simulate.cfl_safety {
        sim.cfl_safety = safety;
    }
    sim.validate().map_err(dynamics_error)?;

    let record = run(&sim).map_err(dynamics_error)?;

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let resolved = serde_json::json!({
        "scenario": scenario.name,
        "dt": sim.t_end / sim.step_count() as f64,
        "steps": sim.step_count(),
        "t_end": sim.t_end,
        "integrator": sim.integrator,
        "n_nodes": sim.grid.n_nodes,
        "decay_rate": scenario.decay_rate,
    });
    let effective = effective_config_json(&file, resolved);
    write_file(
        &out_dir.join("effective_config.json"),
        &serde_json::to_string_pretty(&effective).expect("json"),
    )?;
    match format {
        OutputFormat::Csv => {
            write_file(&out_dir.join("record.csv"), &report::record_csv(&record))?;
            for (step, state) in &record.snapshots {
                write_file(
                    &out_dir.join(format!("snapshot_{step}.csv")),
                    &report::snapshot_csv(&sim.grid, state, &sim.material),
                )?;
            }
        }
        OutputFormat::Json => {
            let mut doc = report::record_json(&record);
            doc["effective_config"] = effective.clone();
            write_file(
                &out_dir.join("record.json"),
                &serde_json::to_string_pretty(&doc).expect("json"),
            )?;
            for (step, state) in &record.snapshots {
                write_file(
                    &out_dir.join(format!("snapshot_{step}.json")),
                    &serde_json::to_string_pretty(&report::snapshot_json(
                        &sim.grid,
                        state,
                        &sim.material,
                    ))
                    .expect("json"),
                )?;
            }
        }
    }

    let e0 = record.energy.first().copied().unwrap_or(0.0);
    let e_end = record.energy.last().copied().unwrap_or(0.0);
    let cum = record.cum_diss.last().copied().unwrap_or(0.0);
    let max_res = record.max_residual.iter().fold(0.0f64, |a, b| a.max(*b));
    println!("scenario:                {}", scenario.name);
    println!("steps:                   {}", sim.step_count());
    println!("energy initial:          {}", report::fmt_f64(e0));
    println!("energy final:            {}", report::fmt_f64(e_end));
    if e0 > 0.0 {
        println!("energy ratio:            {}", report::fmt_f64(e_end / e0));
    }
    println!("cumulative dissipation:  {}", report::fmt_f64(cum));
    println!("max constraint residual: {}", report::fmt_f64(max_res));
    Ok(())
}

fn cmd_eigen(
    config_path: &Path,
    out_dir: &Path,
    format: OutputFormat,
    overrides: &[String],
) -> Result<(), CliError> {
    let file = load_config(config_path, overrides)?;
    let grid = build_grid(&file.grid)?;
    let material = build_material(&file.material)?;
    let bc = BoundaryCondition {
        left: file.bc.left,
        right: file.bc.right,
    };
    let alpha = build_alpha(&file.alpha, &grid)?;
    let modes = eigen_analysis(&grid, &material, &bc, &alpha, file.eigen.classify_tol)
        .map_err(|e| CliError::Numerical(format!("eigen solve: {e}")))?;

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let resolved = serde_json::json!({
        "n_modes": modes.len(),
        "classify_tol": file.eigen.classify_tol,
        "repeated_eigenvalue": modes.repeated_eigenvalue,
    });
    let effective = effective_config_json(&file, resolved);
    write_file(
        &out_dir.join("effective_config.json"),
        &serde_json::to_string_pretty(&effective).expect("json"),
    )?;
    match format {
        OutputFormat::Csv => {
            write_file(&out_dir.join("modes.csv"), &report::modes_csv(&modes))?;
        }
        OutputFormat::Json => {
            let mut doc = report::modes_json(&modes);
            doc["effective_config"] = effective.clone();
            write_file(
                &out_dir.join("modes.json"),
                &serde_json::to_string_pretty(&doc).expect("json"),
            )?;
        }
    }
    // Mode shapes reuse the snapshot schema: the shape goes into the
    // velocity columns of an otherwise zero state.
    for p in 0..file.eigen.dump_modes.min(modes.len()) {
        let mut state = lfdd_core::grid::FieldState::zero(grid.n_nodes);
        state.v = modes.modes[p].clone();
        state.alpha = alpha.clone();
        match format {
            OutputFormat::Csv => write_file(
                &out_dir.join(format!("mode_{p}.csv")),
                &report::snapshot_csv(&grid, &state, &material),
            )?,
            OutputFormat::Json => write_file(
                &out_dir.join(format!("mode_{p}.json")),
                &serde_json::to_string_pretty(&report::snapshot_json(&grid, &state, &material))
                    .expect("json"),
            )?,
        }
    }

    let case1 = modes
        .labels
        .iter()
        .filter(|l| **l == CaseLabel::Case1)
        .count();
    let case2 = modes.len() - case1;
    println!("modes:               {}", modes.len());
    println!("case1 (oscillatory): {case1}");
    println!("case2 (constrained): {case2}");
    if modes.repeated_eigenvalue {
        println!(
            "warning: repeated eigenvalues detected; the per-mode constraint \
             separation argument does not apply, read labels with care"
        );
    }
    Ok(())
}

fn cmd_scenarios() {
    println!("{:<26} description", "name");
    for (name, description) in list_scenarios() {
        println!("{name:<26} {description}");
    }
}

fn cmd_check(level: Level) -> bool {
    let level = match level {
        Level::Fast => CheckLevel::Fast,
        Level::Full => CheckLevel::Full,
    };
    // Test hook: LFDD_FAULT_INJECT=corrupt_b corrupts the plastic-feedback
    // assembly so the identity checks must fail.
    let fault = match std::env::var("LFDD_FAULT_INJECT").as_deref() {
        Ok("corrupt_b") => FaultInjection::CorruptPlasticFeedback,
        _ => FaultInjection::None,
    };
    let results = run_checks(level, fault);
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<28} measured {:>12.4e}  tol {:>12.4e}  {}",
            r.name, r.measured, r.tolerance, r.detail
        );
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} checks passed", results.len());
    all_passed(&results)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate {
            config,
            out,
            format,
            set,
        } => cmd_simulate(config, out, *format, set),
        Command::Eigen {
            config,
            out,
            format,
            set,
        } => cmd_eigen(config, out, *format, set),
        Command::Scenarios => {
            cmd_scenarios();
            Ok(())
        }
        Command::Check { level } => {
            return if cmd_check(*level) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
