use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lsclaw::experiment::{run_experiment, ExperimentConfig, Kind};

/// Level-set transport-collapse solver for scalar conservation laws.
#[derive(Parser)]
#[command(name = "lsclaw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for ladder studies.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Time-step a trajectory and write snapshots plus diag.csv.
    Run(CommonArgs),
    /// Refinement-ladder error study writing errors.csv.
    Convergence(CommonArgs),
    /// Scheme-vs-reference error table (compare.csv).
    Compare(CommonArgs),
    /// Full invariant-check sweep writing checks.csv.
    Checks(CommonArgs),
}

fn execute(kind: Kind, args: &CommonArgs) -> lsclaw::Result<bool> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    cfg.kind = kind;
    let report = run_experiment(&cfg, &args.out, args.threads)?;
    for m in &report.messages {
        println!("{m}");
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Run(a) => (Kind::Run, a),
        Command::Convergence(a) => (Kind::Convergence, a),
        Command::Compare(a) => (Kind::Compare, a),
        Command::Checks(a) => (Kind::Checks, a),
    };
    match execute(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
