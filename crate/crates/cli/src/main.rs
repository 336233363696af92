//! `halfspace` command line: linear and nonlinear solves, operator
//! verification, norm evaluation and scaling checks.

mod commands;
mod config;
mod error;
mod snapshot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "halfspace", version, about = "Half-space Stokes and Navier-Stokes solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file; defaults apply to every missing key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random data and samples (overrides `seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (overrides `threads`).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Multiplies every verification threshold.
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Linear Stokes solve with diagnostics and a solution snapshot.
    SolveStokes,
    /// Picard iteration for the Navier-Stokes problem.
    SolveNs,
    /// Operator-ratio studies and oracle comparisons.
    VerifyOps,
    /// Norms of a stored snapshot.
    Norms,
    /// Invariance of the data and solution norms under parabolic rescaling.
    Scaling,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::SolveStokes => "solve-stokes",
            Command::SolveNs => "solve-ns",
            Command::VerifyOps => "verify-ops",
            Command::Norms => "norms",
            Command::Scaling => "scaling",
        }
    }
}

fn resolve(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(s) = cli.tolerance_scale {
        cfg.tolerance_scale = Some(s);
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: &Config, out: &Path) -> Result<Option<CliError>, CliError> {
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(CliError::runtime)?;
    }
    std::fs::create_dir_all(out)?;
    let outcome = match cli.command {
        Command::SolveStokes => commands::solve_stokes(cfg, out)?,
        Command::SolveNs => commands::solve_ns(cfg, out)?,
        Command::VerifyOps => commands::verify_ops(cfg, out)?,
        Command::Norms => commands::norms(cfg, out)?,
        Command::Scaling => commands::scaling(cfg, out)?,
    };
    snapshot::write_json(&out.join("report.json"), &outcome.report)?;
    Ok(outcome.failure)
}

/// Prints the error object and leaves a copy in the output directory.
fn report_error(e: &CliError, out: Option<&Path>) {
    eprintln!("{}", e.to_json());
    if let Some(dir) = out.filter(|d| d.is_dir()) {
        let _ = std::fs::write(dir.join("error.json"), e.to_json() + "\n");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match resolve(&cli) {
        Ok(cfg) => {
            let out = cfg.output.dir.clone();
            (execute(&cli, &cfg, &out), Some(out))
        }
        Err(e) => (Err(e), cli.out.clone()),
    };
    match result {
        Ok(None) => {
            eprintln!("{}: ok", cli.command.name());
            ExitCode::SUCCESS
        }
        Ok(Some(e)) | Err(e) => {
            report_error(&e, out.as_deref());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
