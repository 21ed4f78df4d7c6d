mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fractal_sandpile::{Boundary, Family};

#[derive(Parser)]
#[command(name = "sandpile", version, about = "Abelian sandpiles on fractal graph approximations")]
struct Cli {
    /// Seed for randomized modes; recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it as JSON.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drop grains on a graph and stabilize.
    Stabilize(StabilizeArgs),
    /// Identity element and least k per level.
    Identity {
        #[arg(long)]
        family: FamilyArg,
        /// Single level; use --levels for a survey.
        #[arg(long, conflicts_with = "levels")]
        level: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u32>,
        #[arg(long, default_value = "corner-sinks")]
        boundary: BoundaryArg,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Sandpile group via Smith normal form.
    Snf {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diameter growth under repeated central drops.
    Growth {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long, default_value = "doubling")]
        schedule: ScheduleArg,
        #[arg(long, default_value_t = 16)]
        min: u64,
        #[arg(long, default_value_t = 131_072)]
        max: u64,
        #[arg(long, default_value_t = 3)]
        start_level: u32,
        /// Auto-grow cap (default: SANDPILE_MAX_LEVEL or a per-family cap).
        #[arg(long)]
        max_level: Option<u32>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Periods of repeated central drops on nested cuts.
    Period {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        max_n: u32,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, default_value_t = 2_000_000)]
        max_states: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    family: FamilyArg,
    #[arg(long)]
    level: u32,
    #[arg(long, default_value = "corner-sinks")]
    boundary: BoundaryArg,
}

#[derive(Args)]
struct StabilizeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// VERTEX:COUNT; VERTEX may be `v0`. Repeatable.
    #[arg(long = "drop", required = true)]
    drops: Vec<String>,
    /// Start from this configuration (JSON array) instead of zero.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Topple in a random order drawn from --seed instead of FIFO.
    #[arg(long)]
    random_order: bool,
    #[arg(long)]
    render: Option<PathBuf>,
    #[arg(long, default_value_t = fractal_sandpile::io::DEFAULT_WIDTH)]
    width: u32,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Sg,
    Sgc,
    Hg,
    Pg,
    Mg,
    TriangleChain,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Sg => Family::Sg,
            FamilyArg::Sgc => Family::Sgc,
            FamilyArg::Hg => Family::Hg,
            FamilyArg::Pg => Family::Pg,
            FamilyArg::Mg => Family::Mg,
            FamilyArg::TriangleChain => Family::TriangleChain,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    CornerSinks,
    Collapsed,
    Normal,
    CornerCells,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Boundary {
        match b {
            BoundaryArg::CornerSinks => Boundary::CornerSinks,
            BoundaryArg::Collapsed => Boundary::CollapsedSink,
            BoundaryArg::Normal => Boundary::Normal,
            BoundaryArg::CornerCells => Boundary::CornerCells,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Doubling,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
