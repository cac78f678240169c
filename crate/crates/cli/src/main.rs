// SPDX-License-Identifier: Apache-2.0

//! `cntmin`: command-line front end for the minority-gate models.
//!
//! Exit status: 0 on success or a passing verdict, 1 when a check ran but
//! failed (or a fit was infeasible), 2 on usage and validation errors.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration.
    Usage(String),
    /// Inputs were valid but the computation could not produce a result.
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cntmin", version, about = "CNTFET minority-gate modeling and verification")]
struct Cli {
    /// Emit machine-readable JSON instead of text/CSV.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Geometry, conduction kind and threshold voltage of a CNT.
    Device { n1: u32, n2: u32 },
    /// Minority truth table, compressed by input weight.
    Truthtable {
        n: u32,
        /// Emit every input vector as CSV.
        #[arg(long)]
        full: bool,
    },
    /// Conventional SOP transistor count versus the divider gate.
    Cost { n: u32 },
    /// Evaluate one input vector through the analog gate model.
    Eval {
        config: Option<PathBuf>,
        /// Input vector, X1 first (e.g. 0000111). Overrides the config's "vector".
        #[arg(long)]
        vector: Option<String>,
    },
    /// Exhaustively check the analog gate against the minority function.
    Check { config: Option<PathBuf> },
    /// Build a k-input NAND or NOR on a (2k-1)-input minority gate.
    Derive { kind: String, k: u32 },
    /// Delay/energy sweep over load capacitance or supply.
    Sweep {
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit r_eff and c_par to (c_load, delay) points.
    Calibrate {
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo functional yield under diameter variation.
    Mc {
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a bundled reference table and its consistency checks.
    Paperdata { table: String },
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    use commands::*;
    match cli.command {
        Command::Device { n1, n2 } => device(n1, n2),
        Command::Truthtable { n, full } => truthtable(n, full),
        Command::Cost { n } => cost(n),
        Command::Eval { config, vector } => eval(config.as_deref(), vector.as_deref()),
        Command::Check { config } => check(config.as_deref()),
        Command::Derive { kind, k } => derive(&kind, k),
        Command::Sweep { config, .. } => sweep(config.as_deref()),
        Command::Calibrate { config, .. } => calibrate(config.as_deref()),
        Command::Mc { config, .. } => monte_carlo(config.as_deref()),
        Command::Paperdata { table } => paperdata(&table),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let out = match &cli.command {
        Command::Sweep { out, .. } | Command::Calibrate { out, .. } | Command::Mc { out, .. } => out.clone(),
        _ => None,
    };

    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Failed(_) => 1,
            });
        }
    };

    let body = if json {
        let mut s = serde_json::to_string_pretty(&outcome.json).expect("report serializes");
        s.push('\n');
        s
    } else {
        outcome.text
    };
    let written = match out {
        Some(path) => std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
