//! `qtower`: batch verification runs and demos for the qtower library.
//!
//! Exit codes: 0 pass, 1 check failed, 2 parse or input error,
//! 3 unsupported operation, 4 resource guard.

mod commands;
mod error;
mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use error::CliError;
use settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "qtower", version, about = "Ladder-operator algebra, Fock spaces and quantization towers")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Root random seed (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pass/fail tolerance (default 1e-10)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON file with default values for any flag (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal-order a ladder expression
    NormalOrder(commands::NormalOrderArgs),
    /// Relative-frequency check on random truth vectors
    Eq11(commands::Eq11Args),
    /// Dirac versus photon field contrast suite
    Contrast(commands::ContrastArgs),
    /// Named quantization tower over the binary alternative
    Tower(commands::TowerArgs),
    /// Green parabose relations
    Parabose(commands::ParaboseArgs),
}

/// A finished run: rendered text and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let settings = Settings::load(cli.global.config.as_deref())?;
    let seed = settings.pick(cli.global.seed, "seed", 0u64)?;
    let tolerance = settings.pick(cli.global.tolerance, "tolerance", 1e-10f64)?;
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CliError::Input(format!("tolerance must be positive and finite, got {tolerance}")));
    }
    let format = settings.pick_opt(cli.global.format, "format")?;
    let ctx = commands::Context { seed, tolerance, format, settings: &settings };
    let outcome = match cli.command {
        Command::NormalOrder(a) => commands::normal_order(a, &ctx)?,
        Command::Eq11(a) => commands::eq11(a, &ctx)?,
        Command::Contrast(a) => commands::contrast(a, &ctx)?,
        Command::Tower(a) => commands::tower(a, &ctx)?,
        Command::Parabose(a) => commands::parabose(a, &ctx)?,
    };
    let out: Option<PathBuf> = settings.pick_opt(cli.global.out, "out")?;
    match out {
        Some(path) => std::fs::write(&path, &outcome.text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) if o.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
