use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod args;
mod cmd;

/// Workbench for emergent algebras: law checks, term rewriting, limits and braids.
///
/// Exit status is 0 when every check passes, 1 when a check fails and 2 on
/// usage or configuration errors.
#[derive(Debug, Parser)]
#[command(name = "emerge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the quasigroup axioms, gate identities and distributivity of a model.
    Check(cmd::check::CheckArgs),
    /// Prove identities between dilation terms by rewriting.
    Prove(cmd::prove::ProveArgs),
    /// Convergence of emergent operations, metrics and norms as the scale shrinks.
    Limits(cmd::limits::LimitsArgs),
    /// Color braid diagrams and measure Reidemeister defects.
    Braid(cmd::braid::BraidArgs),
    /// Convergence of finite-scale derivatives.
    Diff(cmd::diff::DiffArgs),
    /// Summarize the verdicts in a saved report.
    Report(cmd::report::ReportArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check(a) => cmd::check::run(a),
        Command::Prove(a) => cmd::prove::run(a),
        Command::Limits(a) => cmd::limits::run(a),
        Command::Braid(a) => cmd::braid::run(a),
        Command::Diff(a) => cmd::diff::run(a),
        Command::Report(a) => cmd::report::run(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
