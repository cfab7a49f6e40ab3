//! `cylbench`: build atom structures, run checks, play games and search for
//! hyperbases, writing deterministic JSON reports.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cylbench_core::bao::axioms::DEFAULT_SEED;

#[derive(Parser, Serialize)]
#[command(name = "cylbench", version, about = "Atom structures, basic matrices, games and hyperbases")]
pub struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
    /// Seed for randomized checks and sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Work budget: atom bound for build, state budget for game, branch
    /// evaluations for search, attempts for sample-graph.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Rainbow preset, e.g. `smooth(3)`, `descent(2)` or a bundled name.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Cap on worker threads. Reports do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build an atom structure.
    Build(BuildArgs),
    /// Run a check suite; exit 1 when it fails.
    Check(CheckArgs),
    /// Solve an atomic game exactly.
    Game(GameArgs),
    /// Search for a hyperbasis within bounds.
    Search(SearchArgs),
    /// Sample a graph with large girth and chromatic number.
    SampleGraph(SampleArgs),
    /// Summarize report files.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Alpha,
    Matn,
    Eta,
    Rainbow,
    M,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Dot,
    Dimacs,
}

#[derive(Args, Serialize)]
pub struct Source {
    /// `K3`, `C5`, `petersen`, … or a DIMACS file.
    #[arg(long)]
    pub graph: Option<String>,
    /// Dimension, also the colour count of the relation-algebra structure.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// JSON input: a relation-algebra structure for `alpha`-based work, an
    /// atom structure otherwise.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct BuildArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Ra,
    Ca,
    Qea,
    Basis,
    Simple,
    Lemma2,
    Hyperbasis,
    Square,
}

#[derive(Args, Serialize)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Structure checked by `ca`, `qea` and `simple` (default `matn` for
    /// `ca`, `eta` otherwise).
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Random trials for the axiom and simplicity suites.
    #[arg(long, default_value_t = cylbench_core::bao::axioms::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Check axioms over all atom assignments instead of random sets.
    #[arg(long)]
    pub exhaustive: bool,
    /// Builder stages before the square check.
    #[arg(long, default_value_t = 1)]
    pub stages: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameChoice {
    Rainbow,
    Gk,
    Fm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Search,
    Pigeonhole,
    Descent,
}

#[derive(Args, Serialize)]
pub struct GameArgs {
    #[arg(long, value_enum, default_value = "rainbow")]
    pub game: GameChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Most nodes on the board.
    #[arg(long, default_value_t = 6)]
    pub nodes: usize,
    #[arg(long, default_value_t = 8)]
    pub rounds: usize,
    /// The universal player's strategy.
    #[arg(long, value_enum, default_value = "search")]
    pub forall: Strategy,
    /// Also play one game against the exact existential player.
    #[arg(long)]
    pub transcript: bool,
}

#[derive(Args, Serialize)]
pub struct SearchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Hyperlabels are drawn from `0..lambda`.
    #[arg(long, default_value_t = 1)]
    pub lambda: u32,
    /// Largest basis accepted.
    #[arg(long)]
    pub size: Option<usize>,
    /// Include the basis matrices in the report.
    #[arg(long)]
    pub emit_basis: bool,
}

#[derive(Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 4)]
    pub girth: usize,
    #[arg(long, default_value_t = 3)]
    pub chi: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Serialize)]
pub struct ReportArgs {
    pub files: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("cylbench: {e}");
            return ExitCode::from(report::EXIT_USAGE);
        }
    }
    match commands::run(&cli) {
        Ok(out) => match out.emit(cli.out.as_deref()) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("cylbench: {e}");
                ExitCode::from(report::EXIT_USAGE)
            }
        },
        Err(e) => {
            eprintln!("cylbench: {e}");
            ExitCode::from(report::EXIT_USAGE)
        }
    }
}
