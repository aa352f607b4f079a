//! Command-line front end for `dephaselab-core`: figure and table datasets,
//! ad-hoc evolutions and threshold searches, written as CSV or JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod input;
pub mod parallel;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::Settings;
pub use crate::error::{CliError, Result};
use crate::parallel::RayonExecutor;

#[derive(Debug, Parser)]
#[command(name = "dephaselab", version, about = "Two-qubit Werner states under collective dephasing")]
pub struct Cli {
    /// Plain-text `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dataset behind figure 1-6.
    Figure(FigureArgs),
    /// Fidelity table (only table 1).
    Table(TableArgs),
    /// Integrate a master equation and report measures along the way.
    Evolve(EvolveArgs),
    /// Disentanglement and CHSH-violation loss times as JSON.
    Threshold(ThresholdArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    pub id: u32,
    /// Step-drive strength zeta1 / gamma (figure 4).
    #[arg(long)]
    pub zeta_over_gamma: Option<f64>,
    /// Werner weight (figure 6).
    #[arg(long)]
    pub r: Option<f64>,
    /// Dephasing-axis tilt in degrees (figures 5, 6).
    #[arg(long)]
    pub theta_deg: Option<f64>,
    /// RK4 step (figures 2-4).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TableArgs {
    pub id: u32,
    /// Comma-separated Werner weights.
    #[arg(long)]
    pub r: Option<String>,
    /// Dephasing-axis tilt in degrees [default: 17].
    #[arg(long)]
    pub theta_deg: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// pure-dephasing, sym-drive, asym-drive, step-drive or rotated-dephasing.
    #[arg(long)]
    pub model: Option<String>,
    /// Dephasing rate [default: 1].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Drive strength on both qubits.
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub omega1: Option<f64>,
    #[arg(long)]
    pub omega2: Option<f64>,
    /// Step-drive strength.
    #[arg(long)]
    pub zeta1: Option<f64>,
    /// Time the step drive switches off.
    #[arg(long)]
    pub t_off: Option<f64>,
    /// Dephasing-axis tilt in degrees (rotated-dephasing).
    #[arg(long)]
    pub theta_deg: Option<f64>,
    /// werner:<family>:<r>, bell:<kind> or file:<path>; families psi-, psi+, phi+, phi-.
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Final time [default: 1].
    #[arg(long)]
    pub t_end: Option<f64>,
    /// RK4 step [default: 1e-3 / max(1, fastest rate)].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Report every n-th step [default: 1].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Append the 32 real components of the state to each row.
    #[arg(long)]
    pub full_state: bool,
    /// Append the fidelity with the initial state.
    #[arg(long)]
    pub fidelity: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Search horizon for the numeric path [default: 10 / gamma].
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ModelArgs {
    fn apply(&self, s: &mut Settings) {
        s.set("model", self.model.as_ref());
        s.set("gamma", self.gamma);
        s.set("omega", self.omega);
        s.set("omega1", self.omega1);
        s.set("omega2", self.omega2);
        s.set("zeta1", self.zeta1);
        s.set("t-off", self.t_off);
        s.set("theta-deg", self.theta_deg);
        s.set("state", self.state.as_ref());
    }
}

impl Cli {
    /// The config file (if any) overlaid with the flags of the chosen command.
    pub fn settings(&self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        match &self.command {
            Command::Figure(a) => {
                s.set("zeta-over-gamma", a.zeta_over_gamma);
                s.set("r", a.r);
                s.set("theta-deg", a.theta_deg);
                s.set("dt", a.dt);
                s.set("out", a.out.as_ref().map(|p| p.display()));
            }
            Command::Table(a) => {
                s.set("r", a.r.as_ref());
                s.set("theta-deg", a.theta_deg);
                s.set("out", a.out.as_ref().map(|p| p.display()));
            }
            Command::Evolve(a) => {
                a.model.apply(&mut s);
                s.set("t-end", a.t_end);
                s.set("dt", a.dt);
                s.set("stride", a.stride);
                s.set_flag("full-state", a.full_state);
                s.set_flag("fidelity", a.fidelity);
                s.set("out", a.out.as_ref().map(|p| p.display()));
            }
            Command::Threshold(a) => {
                a.model.apply(&mut s);
                s.set("t-max", a.t_max);
                s.set("out", a.out.as_ref().map(|p| p.display()));
            }
        }
        Ok(s)
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    // temp files are created owner-only; outputs are ordinary data files
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        std::fs::set_permissions(tmp.path(), std::fs::Permissions::from_mode(0o644))
            .map_err(|e| CliError::io(tmp.path(), e))?;
    }
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Runs the parsed command, sending output to `--out` or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut impl Write) -> Result<()> {
    let s = cli.settings()?;
    let text = match &cli.command {
        Command::Figure(a) => commands::figure(a.id, &s, &RayonExecutor::from_env()?)?,
        Command::Table(a) => commands::table(a.id, &s, &RayonExecutor::from_env()?)?,
        Command::Evolve(_) => commands::evolve(&s)?,
        Command::Threshold(_) => commands::threshold(&s)?,
    };
    match s.str("out") {
        Some(path) => write_atomic(Path::new(path), text.as_bytes()),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}
