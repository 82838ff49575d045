use std::path::PathBuf;
use std::process::ExitCode;

use cdlab::{run_file, Command};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cdlab",
    version,
    about = "Cesàro orbit experiments for weighted backward shifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Report destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel scans.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Witness search for a unilateral family.
    CheckUnilateral(Common),
    /// Witness search for a bilateral family.
    CheckBilateral(Common),
    /// Build the schedule n_1 < n_2 < ... of level inequalities.
    Schedule(Common),
    /// Assemble a vector approximating the target tuples.
    Construct(Common),
    /// Right-inverse transitivity probe.
    ProbeTransitivity(Common),
    /// Blow-up/collapse probe.
    ProbeBlowUpCollapse(Common),
    /// Per-n transitivity table over a range.
    ProbeMixing(Common),
    /// Hypercyclicity comparison for a single bilateral shift.
    SalasCompare(Common),
}

impl Cmd {
    fn split(self) -> (Command, Common) {
        match self {
            Cmd::CheckUnilateral(c) => (Command::CheckUnilateral, c),
            Cmd::CheckBilateral(c) => (Command::CheckBilateral, c),
            Cmd::Schedule(c) => (Command::Schedule, c),
            Cmd::Construct(c) => (Command::Construct, c),
            Cmd::ProbeTransitivity(c) => (Command::ProbeTransitivity, c),
            Cmd::ProbeBlowUpCollapse(c) => (Command::ProbeBlowUpCollapse, c),
            Cmd::ProbeMixing(c) => (Command::ProbeMixing, c),
            Cmd::SalasCompare(c) => (Command::SalasCompare, c),
        }
    }
}

fn main() -> ExitCode {
    let (command, args) = Cli::parse().command.split();
    let level = if args.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let run = || run_file(&args.config, command);
    let result = match args.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("error: cannot start {k} worker threads: {e}");
                return ExitCode::from(1);
            }
        },
        None => run(),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(report.exit_code())
}
