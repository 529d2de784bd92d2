//! `polyprime` — count prime pairs whose combination lands in a polynomial
//! image, and compare against the predicted asymptotics.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};

use crate::config::CommonArgs;

#[derive(Parser)]
#[command(
    name = "polyprime",
    version,
    about = "Prime pairs p1, p2 with a1*p1 + a2*p2 in the image of an integer polynomial",
    long_about = "Counts ordered prime pairs (p1, p2) with p1, p2 <= N whose linear \
combination a1*p1 + a2*p2 equals f(d) for some integer d >= 1, computes the \
Hardy-Littlewood-style prediction for that count (singular series, bias \
factors, main term), and verifies the two against each other.\n\n\
Output is CSV (default) or JSON; every numeric column uses shortest \
round-trip formatting so runs are reproducible byte for byte."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and weighted pair counts next to their predicted main terms
    Count(CommonArgs),
    /// Predicted main terms only; no sieving, fast at any N
    Predict(CommonArgs),
    /// Singular series via the Euler product, cross-checked by the modulus sum
    Series(CommonArgs),
    /// Local bias factors: predicted vs. observed in actual prime pairs
    Bias(CommonArgs),
    /// Battery of internal-consistency identities; nonzero exit on any failure
    Verify(CommonArgs),
    /// Count over a sweep of N values with timing-free, byte-stable output
    Sweep(CommonArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Count(args) => commands::run("count", args),
        Command::Predict(args) => commands::run("predict", args),
        Command::Series(args) => commands::run("series", args),
        Command::Bias(args) => commands::run("bias", args),
        Command::Verify(args) => commands::run("verify", args),
        Command::Sweep(args) => commands::run("sweep", args),
    };
    std::process::exit(code);
}
