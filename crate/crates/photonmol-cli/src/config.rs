//! Configuration ingestion: JSON config files, unit conversion, and flag
//! overrides.
//!
//! A config file is a flat JSON object. Physical parameters are given
//! either directly in units of κ ≡ κ_a (`delta_a`, `g`, `j`, …) or as
//! laboratory frequencies in GHz/2π via `*_ghz` twins plus `kappa_ghz`
//! (κ/2π); conversion is `value_in_kappa = value_ghz / kappa_ghz`. A file
//! may also carry the command, engine, output path and verbosity, all of
//! which command-line flags override. Unknown keys and mixed plain/GHz
//! values for the same parameter are rejected with line information.

use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use photonmol::model::SystemParams;
use photonmol::sweep::Engine;
use serde::{Deserialize, Serialize};

/// Config or usage problem; maps to exit code 2.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub message: String,
    /// 1-based line in the config file, when known.
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            message: message.into(),
            line: None,
            column: None,
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "config error at line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "config error at line {l}: {}", self.message),
            _ => write!(f, "config error: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        ConfigError {
            message: e.to_string(),
            line: (line > 0).then_some(line),
            column: (column > 0).then_some(column),
        }
    }
}

/// The subcommands a config file may name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Steady,
    Sweep,
    Figure,
    Optimize,
    Paths,
    Validate,
}

impl FromStr for Command {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "steady" => Command::Steady,
            "sweep" => Command::Sweep,
            "figure" => Command::Figure,
            "optimize" => Command::Optimize,
            "paths" => Command::Paths,
            "validate" => Command::Validate,
            other => return Err(ConfigError::new(format!("unknown command '{other}'"))),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Steady => "steady",
            Command::Sweep => "sweep",
            Command::Figure => "figure",
            Command::Optimize => "optimize",
            Command::Paths => "paths",
            Command::Validate => "validate",
        };
        f.write_str(s)
    }
}

/// Engine name parser for `--engine` flags and config files.
pub fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "full" => Ok(Engine::Full),
        "weakdrive" => Ok(Engine::Weakdrive),
        other => Err(format!("unknown engine '{other}' (expected full or weakdrive)")),
    }
}

/// On-disk config schema. Everything is optional; unknown keys are errors.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    command: Option<String>,
    engine: Option<String>,
    out: Option<PathBuf>,
    verbosity: Option<u8>,
    /// "kappa" (default) or "ghz_over_2pi".
    units: Option<String>,
    /// κ/2π in GHz; required whenever any `*_ghz` field is used.
    kappa_ghz: Option<f64>,
    delta_a: Option<f64>,
    delta_b: Option<f64>,
    g: Option<f64>,
    j: Option<f64>,
    e_a: Option<f64>,
    e_b: Option<f64>,
    theta: Option<f64>,
    kappa_a: Option<f64>,
    kappa_b: Option<f64>,
    gamma: Option<f64>,
    n_max_a: Option<usize>,
    n_max_b: Option<usize>,
    delta_a_ghz: Option<f64>,
    delta_b_ghz: Option<f64>,
    g_ghz: Option<f64>,
    j_ghz: Option<f64>,
    e_a_ghz: Option<f64>,
    e_b_ghz: Option<f64>,
    kappa_b_ghz: Option<f64>,
    gamma_ghz: Option<f64>,
}

/// Parameter overrides supplied as command-line flags (κ units only).
/// `--delta` and `--e` set both members of their pair; the specific flags
/// win over the pair flags.
#[derive(Debug, Clone, Default, PartialEq, clap::Args)]
pub struct ParamOverrides {
    /// Set both detunings Δ_a = Δ_b (units of κ).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub delta_a: Option<f64>,
    #[arg(long)]
    pub delta_b: Option<f64>,
    /// QD–cavity coupling g (units of κ).
    #[arg(long)]
    pub g: Option<f64>,
    /// Intercavity tunneling J (units of κ).
    #[arg(long)]
    pub j: Option<f64>,
    /// Relative drive phase θ in radians.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Set both drive amplitudes E_a = E_b (units of κ).
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long)]
    pub e_a: Option<f64>,
    #[arg(long)]
    pub e_b: Option<f64>,
    /// Decay rate of cavity b (units of κ).
    #[arg(long)]
    pub kappa_b: Option<f64>,
    /// QD spontaneous-emission rate γ (units of κ).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Fock cutoff of mode a.
    #[arg(long)]
    pub n_max_a: Option<usize>,
    /// Fock cutoff of mode b.
    #[arg(long)]
    pub n_max_b: Option<usize>,
}

impl ParamOverrides {
    fn apply(&self, p: &mut SystemParams) {
        if let Some(v) = self.delta {
            p.delta_a = v;
            p.delta_b = v;
        }
        if let Some(v) = self.e {
            p.e_a = v;
            p.e_b = v;
        }
        if let Some(v) = self.delta_a {
            p.delta_a = v;
        }
        if let Some(v) = self.delta_b {
            p.delta_b = v;
        }
        if let Some(v) = self.g {
            p.g = v;
        }
        if let Some(v) = self.j {
            p.j = v;
        }
        if let Some(v) = self.theta {
            p.theta = v;
        }
        if let Some(v) = self.e_a {
            p.e_a = v;
        }
        if let Some(v) = self.e_b {
            p.e_b = v;
        }
        if let Some(v) = self.kappa_b {
            p.kappa_b = v;
        }
        if let Some(v) = self.gamma {
            p.gamma = v;
        }
        if let Some(v) = self.n_max_a {
            p.n_max_a = v;
        }
        if let Some(v) = self.n_max_b {
            p.n_max_b = v;
        }
    }
}

/// Fully resolved run description: file values merged with flag overrides,
/// units converted, parameters validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: SystemParams,
    pub engine: Engine,
    pub out: Option<PathBuf>,
    pub verbosity: u8,
}

impl RunConfig {
    /// Serialize back to the flat config-file schema (κ units).
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn to_json(&self) -> String {
        let f = ConfigFile {
            command: Some(self.command.to_string()),
            engine: Some(match self.engine {
                Engine::Full => "full".to_string(),
                Engine::Weakdrive => "weakdrive".to_string(),
            }),
            out: self.out.clone(),
            verbosity: Some(self.verbosity),
            units: Some("kappa".to_string()),
            delta_a: Some(self.params.delta_a),
            delta_b: Some(self.params.delta_b),
            g: Some(self.params.g),
            j: Some(self.params.j),
            e_a: Some(self.params.e_a),
            e_b: Some(self.params.e_b),
            theta: Some(self.params.theta),
            kappa_a: Some(self.params.kappa_a),
            kappa_b: Some(self.params.kappa_b),
            gamma: Some(self.params.gamma),
            n_max_a: Some(self.params.n_max_a),
            n_max_b: Some(self.params.n_max_b),
            ..Default::default()
        };
        serde_json::to_string_pretty(&f).expect("plain structs serialize")
    }
}

fn convert_units(f: &ConfigFile, p: &mut SystemParams) -> Result<(), ConfigError> {
    match f.units.as_deref() {
        None | Some("kappa") | Some("ghz_over_2pi") => {}
        Some(other) => {
            return Err(ConfigError::new(format!(
                "unknown units '{other}' (expected kappa or ghz_over_2pi)"
            )))
        }
    }
    let pairs: [(&str, Option<f64>, Option<f64>, &mut f64); 8] = [
        ("delta_a", f.delta_a, f.delta_a_ghz, &mut p.delta_a),
        ("delta_b", f.delta_b, f.delta_b_ghz, &mut p.delta_b),
        ("g", f.g, f.g_ghz, &mut p.g),
        ("j", f.j, f.j_ghz, &mut p.j),
        ("e_a", f.e_a, f.e_a_ghz, &mut p.e_a),
        ("e_b", f.e_b, f.e_b_ghz, &mut p.e_b),
        ("kappa_b", f.kappa_b, f.kappa_b_ghz, &mut p.kappa_b),
        ("gamma", f.gamma, f.gamma_ghz, &mut p.gamma),
    ];
    let any_ghz = pairs.iter().any(|(_, _, ghz, _)| ghz.is_some())
        || f.units.as_deref() == Some("ghz_over_2pi");
    let kappa_ghz = if any_ghz {
        let k = f
            .kappa_ghz
            .ok_or_else(|| ConfigError::new("kappa_ghz is required with GHz inputs"))?;
        if !(k > 0.0 && k.is_finite()) {
            return Err(ConfigError::new(format!("kappa_ghz must be > 0, got {k}")));
        }
        Some(k)
    } else {
        f.kappa_ghz
    };
    if kappa_ghz.is_some() && f.kappa_a.is_some() {
        return Err(ConfigError::new(
            "kappa_a is fixed to 1 by the unit system when kappa_ghz is given",
        ));
    }
    for (name, plain, ghz, target) in pairs {
        match (plain, ghz) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new(format!(
                    "both {name} and {name}_ghz given; use one"
                )))
            }
            (Some(v), None) => *target = v,
            (None, Some(v)) => *target = v / kappa_ghz.expect("checked above"),
            (None, None) => {}
        }
    }
    if let Some(v) = f.kappa_a {
        p.kappa_a = v;
    }
    if let Some(v) = f.theta {
        p.theta = v;
    }
    if let Some(v) = f.n_max_a {
        p.n_max_a = v;
    }
    if let Some(v) = f.n_max_b {
        p.n_max_b = v;
    }
    Ok(())
}

/// Build the resolved [`RunConfig`] from an optional config file, the
/// subcommand chosen on the command line (if any), and flag overrides.
/// Flags override file values; a command must come from one of the two.
pub fn parse_config(
    path: Option<&Path>,
    cli_command: Option<Command>,
    flags: &ParamOverrides,
    cli_engine: Option<Engine>,
    cli_out: Option<PathBuf>,
) -> Result<RunConfig, ConfigError> {
    let file: ConfigFile = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)?
        }
        None => ConfigFile::default(),
    };
    let file_command = file
        .command
        .as_deref()
        .map(Command::from_str)
        .transpose()?;
    let command = cli_command
        .or(file_command)
        .ok_or_else(|| ConfigError::new("no command"))?;
    let file_engine = file
        .engine
        .as_deref()
        .map(|s| parse_engine(s).map_err(ConfigError::new))
        .transpose()?;
    let engine = cli_engine.or(file_engine).unwrap_or(Engine::Full);
    let mut params = SystemParams::default();
    convert_units(&file, &mut params)?;
    flags.apply(&mut params);
    let params = params
        .validated()
        .map_err(|e| ConfigError::new(e.to_string()))?;
    let verbosity = file.verbosity.unwrap_or(0);
    Ok(RunConfig {
        command,
        params,
        engine,
        out: cli_out.or(file.out),
        verbosity,
    })
}

/// Write `contents` to `path` atomically: a temp file in the same
/// directory is written in full, then renamed over the target, so readers
/// never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
