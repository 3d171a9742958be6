//! `dominion`: exact and approximate inter-color dominance probabilities.
//!
//! Exit status is 0 on success, 2 when the input or arguments are invalid
//! (a JSON error object is printed), and 3 when a cross-check disagrees.

mod bench;
mod common;
mod generate;
mod selftest;
mod solve;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::Failure;

#[derive(Parser)]
#[command(name = "dominion", version, about = "Inter-color dominance probabilities of colored stochastic point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Γ and Λ for a dataset with the chosen method.
    Solve(solve::SolveArgs),
    /// Shorthand for `solve --method approx`.
    Approx(solve::ApproxArgs),
    /// Shorthand for `solve --method fbcsd` (or `fbcsd-brute`).
    Fbcsd(solve::FbcsdArgs),
    /// Write a seeded random dataset.
    Generate(generate::GenerateArgs),
    /// Cross-check the solvers against each other and the range tree against a naive store.
    Selftest(selftest::SelftestArgs),
    /// Time a method over several sizes and fit the growth rate.
    Bench(bench::BenchArgs),
    /// Replay a range-tree operation trace against the naive store.
    ReplayTrace(selftest::ReplayArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Approx(args) => solve::run(&args.into()),
        Command::Fbcsd(args) => solve::run(&args.into()),
        Command::Generate(args) => generate::run(&args),
        Command::Selftest(args) => selftest::run(&args),
        Command::Bench(args) => bench::run(&args),
        Command::ReplayTrace(args) => selftest::replay(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(err)) => {
            println!("{}", serde_json::to_string_pretty(&err).expect("error object serializes"));
            ExitCode::from(2)
        }
        Err(Failure::Mismatch) => ExitCode::from(3),
    }
}
