//! `photonmol`: steady-state photon statistics of a driven-dissipative
//! photonic molecule from the command line.
//!
//! Subcommands:
//! - `steady`   — one operating point, JSON observable report on stdout
//! - `sweep`    — evaluate a sweep spec file, write CSV + metadata sidecar
//! - `figure`   — run a named figure preset (`fig2a` … `fig7b`)
//! - `optimize` — minimize g²(0) over one parameter
//! - `paths`    — weak-drive two-photon path decomposition, JSON on stdout
//! - `validate` — run the invariant and acceptance suites
//!
//! Exit codes: 0 success, 1 computational failure (no photons, solver or
//! validation failure), 2 configuration or usage error.

mod config;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use photonmol::solver::{converged_g2, observables};
use photonmol::sweep::{
    figure_names, figure_preset, minimize_g2, run_sweep, to_csv, Engine, SweepParam, SweepResult,
    SweepSpec,
};
use photonmol::validate::{acceptance_checks, all_passed, invariant_checks, render};
use photonmol::weakdrive::{observables_weakdrive, path_decomposition};

use config::{parse_config, parse_engine, write_atomic, Command, ConfigError, ParamOverrides};

#[derive(Parser)]
#[command(
    name = "photonmol",
    version,
    about = "Steady-state photon statistics of a QD–photonic-molecule system"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores). The worker
    /// count never changes results.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct PointArgs {
    /// JSON config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Solver engine: full (master equation) or weakdrive (amplitude
    /// hierarchy).
    #[arg(long, value_parser = parse_engine)]
    engine: Option<Engine>,
    #[command(flatten)]
    params: ParamOverrides,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Solve one operating point and print the observable report as JSON.
    Steady {
        #[command(flatten)]
        point: PointArgs,
        /// Relative tolerance for the Fock-cutoff ladder; 0 evaluates at
        /// the configured cutoffs without a convergence check.
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        /// Also write the report to this file (atomic).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep spec file and write CSV plus a JSON metadata sidecar.
    Sweep {
        /// Sweep spec JSON: {"base": {...}, "axes": [...], "engine": ...,
        /// "convergence_tol": ...}.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; the sidecar lands next to it as
        /// <stem>.meta.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named figure preset and write <name>.csv + <name>.meta.json.
    Figure {
        /// One of: fig2a fig2b fig3a fig3b fig4a fig4b fig5a fig5b fig6a
        /// fig6b fig7a fig7b.
        name: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Minimize g²(0) over one parameter with the full solver.
    Optimize {
        #[command(flatten)]
        point: PointArgs,
        /// Parameter to vary: delta, g, j, theta, e, e_a or e_b.
        #[arg(long)]
        var: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Bracket width at which refinement stops.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Print the weak-drive two-photon path decomposition as JSON.
    Paths {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Run the invariant and acceptance suites; exit 0 iff all pass.
    Validate,
}

enum CliError {
    Config(ConfigError),
    Lib(photonmol::Error),
    Io(std::io::Error),
    ValidationFailed { passed: usize, total: usize },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::ValidationFailed { passed, total } => {
                write!(f, "validation failed: {passed}/{total} checks passed")
            }
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<photonmol::Error> for CliError {
    fn from(e: photonmol::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        use photonmol::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(e) => match e {
                E::InvalidParams(_)
                | E::InvalidTruncation(_)
                | E::InvalidRate(_)
                | E::InvalidTolerance(_)
                | E::SpecError(_)
                | E::UnknownPreset(_) => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
            CliError::ValidationFailed { .. } => 1,
        }
    }
}

/// Write to stdout, exiting quietly if the reader closed the pipe (e.g.
/// `photonmol paths | head`).
fn emit(text: &str) {
    use std::io::Write;
    if std::io::stdout().write_all(text.as_bytes()).is_err() {
        std::process::exit(0);
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        // best effort: a later global-pool init just keeps the default
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(command: CliCommand) -> Result<(), CliError> {
    match command {
        CliCommand::Steady { point, tol, out } => cmd_steady(point, tol, out),
        CliCommand::Sweep { config, out } => cmd_sweep(&config, &out),
        CliCommand::Figure { name, out } => cmd_figure(&name, &out),
        CliCommand::Optimize {
            point,
            var,
            from,
            to,
            tol,
        } => cmd_optimize(point, &var, from, to, tol),
        CliCommand::Paths { point } => cmd_paths(point),
        CliCommand::Validate => cmd_validate(),
    }
}

fn resolve_point(point: PointArgs, command: Command) -> Result<config::RunConfig, CliError> {
    Ok(parse_config(
        point.config.as_deref(),
        Some(command),
        &point.params,
        point.engine,
        None,
    )?)
}

fn cmd_steady(point: PointArgs, tol: f64, out: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = resolve_point(point, Command::Steady)?;
    let report = match cfg.engine {
        Engine::Weakdrive => observables_weakdrive(&cfg.params)?,
        Engine::Full => {
            if tol > 0.0 {
                converged_g2(&cfg.params, tol)?
            } else {
                observables(&cfg.params)?
            }
        }
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&format!("{json}\n"));
    if let Some(path) = out.or(cfg.out) {
        write_atomic(&path, &(json + "\n"))?;
    }
    Ok(())
}

fn read_sweep_spec(path: &Path) -> Result<SweepSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
    let spec: SweepSpec = serde_json::from_str(&text).map_err(ConfigError::from)?;
    Ok(spec)
}

fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

fn write_sweep_outputs(result: &SweepResult, csv_path: &Path) -> Result<(), CliError> {
    write_atomic(csv_path, &to_csv(result))?;
    let mut meta = serde_json::to_value(&result.metadata).expect("metadata serializes");
    meta["generated_at"] = serde_json::Value::String(chrono::Utc::now().to_rfc3339());
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    write_atomic(&sidecar_path(csv_path), &(text + "\n"))?;
    Ok(())
}

fn cmd_sweep(config: &Path, out: &Path) -> Result<(), CliError> {
    let spec = read_sweep_spec(config)?;
    let result = run_sweep(&spec)?;
    write_sweep_outputs(&result, out)?;
    let failed = result.rows.iter().filter(|r| !r.converged).count();
    eprintln!(
        "wrote {} rows to {} ({failed} unconverged)",
        result.rows.len(),
        out.display()
    );
    Ok(())
}

fn cmd_figure(name: &str, out_dir: &Path) -> Result<(), CliError> {
    let spec = figure_preset(name).map_err(|e| match e {
        photonmol::Error::UnknownPreset(n) => CliError::Config(ConfigError::new(format!(
            "unknown figure preset '{n}' (expected one of {})",
            figure_names().join(" ")
        ))),
        other => CliError::Lib(other),
    })?;
    std::fs::create_dir_all(out_dir)?;
    let result = run_sweep(&spec)?;
    let csv_path = out_dir.join(format!("{name}.csv"));
    write_sweep_outputs(&result, &csv_path)?;
    eprintln!(
        "wrote {} rows to {} and {}",
        result.rows.len(),
        csv_path.display(),
        sidecar_path(&csv_path).display()
    );
    Ok(())
}

fn cmd_optimize(point: PointArgs, var: &str, from: f64, to: f64, tol: f64) -> Result<(), CliError> {
    let cfg = resolve_point(point, Command::Optimize)?;
    let var: SweepParam = var.parse()?;
    let (argmin, g2_min) = minimize_g2(&cfg.params, var, (from, to), tol)?;
    let json = serde_json::json!({
        "var": var.name(),
        "from": from,
        "to": to,
        "tol": tol,
        "argmin": argmin,
        "g2_min": g2_min,
    });
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(&json).expect("serializes")
    ));
    Ok(())
}

fn cmd_paths(point: PointArgs) -> Result<(), CliError> {
    let cfg = resolve_point(point, Command::Paths)?;
    let report = path_decomposition(&cfg.params)?;
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("report serializes")
    ));
    Ok(())
}

fn cmd_validate() -> Result<(), CliError> {
    let mut checks = invariant_checks();
    checks.extend(acceptance_checks());
    emit(&render(&checks));
    let passed = checks.iter().filter(|c| c.passed).count();
    emit(&format!("{passed}/{} checks passed\n", checks.len()));
    if all_passed(&checks) {
        Ok(())
    } else {
        Err(CliError::ValidationFailed {
            passed,
            total: checks.len(),
        })
    }
}
