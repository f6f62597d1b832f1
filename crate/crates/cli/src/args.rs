use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use noisy_games::games::ChompVariant;

#[derive(Debug, Parser)]
#[command(name = "noisy-games", version, about = "Solve, sweep and play combinatorial games through a noisy channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a game and list every position's value, move values and class.
    Solve(SolveArgs),
    /// Write the start value and optimal moves over a p-grid as CSV.
    Sweep(SweepArgs),
    /// Recompute the bundled one-pile Nim reference values.
    VerifyAppendix(VerifyArgs),
    /// Check the one-pile Nim conjectures over a p-grid.
    ConjectureScan(ScanArgs),
    /// Estimate the first player's win probability by seeded rollouts.
    Simulate(SimulateArgs),
    /// Run the HTTP play service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// One pile, Hamming channel.
    Nim1,
    /// Several piles, equiprobable channel.
    Nim,
    Chomp,
}

#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    /// JSON game spec; replaces the family flags.
    #[arg(long, value_name = "FILE", conflicts_with = "game")]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub game: Option<Family>,
    /// Pile size for nim1.
    #[arg(long, value_name = "K")]
    pub chips: Option<usize>,
    /// Pile sizes for nim.
    #[arg(long, value_delimiter = ',', value_name = "A,B,..")]
    pub piles: Vec<usize>,
    /// Use the noiseless channel for nim.
    #[arg(long)]
    pub noiseless: bool,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Chomp channel: n8, n4, lower_left or uniform.
    #[arg(long, default_value = "n8")]
    pub variant: ChompVariant,
    /// Channel parameter in [0, 1].
    #[arg(long, value_parser = parse_probability)]
    pub p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Print the listing as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..=1_000_001))]
    pub points: u32,
    /// CSV destination; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON array of {k, percent, value, optimal_moves}; the bundled values when absent.
    #[arg(long, value_name = "FILE")]
    pub expected: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub max_chips: u32,
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..=1_000_001))]
    pub points: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub games: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Directory of static files served outside /api/v1.
    #[arg(long, value_name = "DIR")]
    pub assets: Option<PathBuf>,
    /// Idle minutes before a session is dropped.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub idle_minutes: u64,
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}
