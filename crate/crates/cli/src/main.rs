//! `dualvc`: generate instances, run the heuristics, benchmark, verify.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualvc::graph::Variant;
use dualvc::harness::Backend;
use dualvc::heuristics::Algorithm;

#[derive(Parser, Debug)]
#[command(name = "dualvc", version, about = "Dynamic weighted vertex cover by step-size-adaptive search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an instance, an edit and an original MFDS to a directory.
    Gen(GenArgs),
    /// Run one heuristic on one dynamic instance.
    Solve(SolveArgs),
    /// Run a benchmark plan and write one CSV row per trial.
    Bench(BenchArgs),
    /// Check a dual solution against its graph.
    Verify(VerifyArgs),
    /// Fit a bench CSV against the runtime bound shape.
    Report(ReportArgs),
}

/// Instance family selection shared by `gen` and `solve`.
#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// Cell description (JSON) supplying variant, generator, alpha and seed.
    #[arg(long)]
    config: Option<PathBuf>,
    /// E+, E-, E, W+, W- or W.
    #[arg(long)]
    variant: Option<Variant>,
    /// Number of edges.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    alpha: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random graph instead of the adversarial construction.
    #[arg(long)]
    random: bool,
    /// Vertices of the random graph.
    #[arg(long)]
    n: Option<usize>,
    /// Largest random weight.
    #[arg(long)]
    wmax: Option<u64>,
    /// Edit scale of the random edit.
    #[arg(long)]
    d: Option<usize>,
    /// Redraw random edits that leave the start maximal.
    #[arg(long)]
    nontrivial: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Directory written by `gen`; overrides the family flags.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// ea, rls, ea-fifth or rls-fifth.
    #[arg(long)]
    algo: Option<Algorithm>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = Backend::Exact)]
    backend: Backend,
    /// Final dual solution dump (exact backend only).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-evaluation CSV log.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Benchmark plan (JSON).
    #[arg(long)]
    config: PathBuf,
    /// CSV output; defaults to the plan's `out`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    backend: Option<Backend>,
    /// Base seed replacing every cell's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Budget replacing every cell's budget.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Graph file.
    #[arg(long)]
    instance: PathBuf,
    /// Dual solution dump.
    #[arg(long)]
    dual: PathBuf,
    /// Rate for dumps without an `# alpha=` header.
    #[arg(long)]
    alpha: Option<u64>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Bench CSV.
    #[arg(long)]
    csv: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Solve(args) => commands::solve(args),
        Command::Bench(args) => commands::bench(args),
        Command::Verify(args) => commands::verify(args),
        Command::Report(args) => commands::report(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::EXIT_USAGE)
        }
    }
}
