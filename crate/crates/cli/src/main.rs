//! `muntz`: verification harness for the Müntz-type formulas.

mod commands;
mod config;
mod points;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{DirichletArgs, LineArgs, ResidueArgs, TableArgs, LINE_TOL};
use config::{CommonFlags, ConfigError, RunConfig};
use verify::VerifyArgs;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Parser)]
#[command(name = "muntz", version, about = "Numerical verification of Müntz-type formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check formula cases against their series sides.
    Verify {
        #[command(flatten)]
        args: VerifyArgs,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Compare Dirichlet partial sums with closed forms.
    Dirichlet {
        #[command(flatten)]
        args: DirichletArgs,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Compare closed-form residues with contour integrals.
    Residue {
        #[command(flatten)]
        args: ResidueArgs,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Check the inversion identity on the line Re s = 2 (tol defaults to 1e-7).
    Line {
        #[command(flatten)]
        args: LineArgs,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Write the arithmetic function table as CSV.
    Table {
        #[command(flatten)]
        args: TableArgs,
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn run(cli: Cli) -> Result<Status, ConfigError> {
    match cli.command {
        Command::Verify { args, common } => verify::run(&args, &RunConfig::resolve(&common)?),
        Command::Dirichlet { args, common } => commands::dirichlet(&args, &RunConfig::resolve(&common)?),
        Command::Residue { args, common } => commands::residue(&args, &RunConfig::resolve(&common)?),
        Command::Line { args, common } => {
            let base = RunConfig { tol: LINE_TOL, ..RunConfig::default() };
            commands::line(&args, &RunConfig::resolve_from(base, &common)?)
        }
        Command::Table { args, common } => commands::table(&args, &RunConfig::resolve(&common)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
