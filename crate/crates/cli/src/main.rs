mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{construct, deviation, estimate, validate};
use report::Outcome;

#[derive(Parser, Debug)]
#[command(
    name = "galedim",
    version,
    about = "Gale-based dimension estimates, constructions and checks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random draw; required by randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path. For `construct` this is the sequence file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Estimation window `LO:HI` in bits, replacing `[ceil(n/2), n]`.
    #[arg(long, global = true, value_parser = parse_window)]
    window: Option<(usize, usize)>,
    /// Depth for exhaustive checks.
    #[arg(long, global = true)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension estimates for a sequence file.
    Estimate(estimate::EstimateArgs),
    /// Generate a sequence prefix.
    #[command(subcommand)]
    Construct(construct::ConstructKind),
    /// Large-deviation tails: exact, Monte-Carlo and the exponential bound.
    Deviation(deviation::DeviationArgs),
    /// Check a gale, gambler or predictor file.
    Validate(validate::ValidateArgs),
}

fn parse_window(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text.split_once(':').ok_or("expected LO:HI")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("window start {lo} exceeds end {hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Estimate(args) => estimate::run(&cli.global, args),
        Command::Construct(kind) => construct::run(&cli.global, kind),
        Command::Deviation(args) => deviation::run(&cli.global, args),
        Command::Validate(args) => validate::run(&cli.global, args),
    };
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
