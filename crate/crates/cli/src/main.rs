//! `latinlab`: sampling, statistics and verification runs over Latin squares.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input.

mod audit;
mod count;
mod dist;
mod gen;
mod io;
mod stats;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "latinlab", version, about = "Latin square parity laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write random samples as JSON lines.
    Gen(gen::GenArgs),
    /// Tabulate (N_row, N_col, N_sym) for a file of full squares.
    ParityStats(stats::StatsArgs),
    /// Run a verification suite and print a JSON report.
    Verify(verify::VerifyArgs),
    /// Sample permissible tuples against the stable intercalates of a square.
    AuditExpander(audit::AuditArgs),
    /// Distributions: total variation, Bin(n, 1/2), mu*.
    Dist {
        #[command(subcommand)]
        cmd: dist::DistCmd,
    },
    /// Count intercalates, threatened pairs or entries in bad configurations.
    Count(count::CountArgs),
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    Failed,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("LATINLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = v.trim().parse().with_context(|| format!("LATINLAB_THREADS={v:?} is not a thread count"))?;
    if threads == 0 {
        bail!("LATINLAB_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    configure_threads()?;
    match cli.command {
        Command::Gen(a) => gen::run(a),
        Command::ParityStats(a) => stats::run(a),
        Command::Verify(a) => verify::run(a),
        Command::AuditExpander(a) => audit::run(a),
        Command::Dist { cmd } => dist::run(cmd),
        Command::Count(a) => count::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Optional output path; `None` writes to stdout.
#[derive(clap::Args, Clone, Debug)]
pub struct OutArg {
    /// Output file (stdout if omitted).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
