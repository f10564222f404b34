mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "orientkit", version, about = "Graph orientation with vertex types")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the complexity of a set of vertex types.
    Classify(ClassifyArgs),
    /// Orient an instance.
    Solve(SolveArgs),
    /// Compute the type a gadget simulates.
    Simulate(SimulateArgs),
    /// Solve a pipe rotation puzzle.
    Kplumber(KplumberArgs),
    /// Tile a region with polyominoes.
    Tile(TileArgs),
    /// Check every shipped gadget and the classifier examples.
    VerifySuite(VerifySuiteArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct ClassifyArgs {
    /// One type or directive per line.
    #[arg(long)]
    pub gamma: PathBuf,
    #[arg(long)]
    pub planar: bool,
    /// Add both constants.
    #[arg(long)]
    pub constants: bool,
    /// Add a terminator of this net flow (repeatable).
    #[arg(long)]
    pub terminator: Vec<i64>,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Instance in text or JSON form.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value = "auto", value_parser = clap::builder::PossibleValuesParser::new(commands::SOLVE_ALGORITHMS))]
    pub algorithm: String,
    /// Also count orientations by enumeration.
    #[arg(long)]
    pub count: bool,
    /// Fall back to enumeration when no polynomial algorithm applies.
    #[arg(long)]
    pub allow_brute: bool,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub gadget: PathBuf,
    /// Type to compare against; defaults to the file's own target.
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Args)]
pub struct KplumberArgs {
    #[arg(long)]
    pub grid: PathBuf,
    /// Search rotations exhaustively when curve tiles are present.
    #[arg(long)]
    pub allow_brute: bool,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct TileArgs {
    #[command(subcommand)]
    pub sub: Option<TileCommand>,
    #[arg(long, required = true)]
    pub region: Option<PathBuf>,
    /// Tile names or pictures, comma separated.
    #[arg(long, required = true)]
    pub tiles: Option<String>,
    #[arg(long, value_enum, default_value_t = TileAlgorithm::Dlx)]
    pub algorithm: TileAlgorithm,
    #[arg(long)]
    pub count: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TileAlgorithm {
    Greedy,
    Dlx,
}

#[derive(Subcommand)]
pub enum TileCommand {
    /// Compute the port relation of a tiling gadget.
    VerifyGadget {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        target: String,
    },
}

#[derive(Args)]
pub struct VerifySuiteArgs {
    /// Check the `.gdg` files of this directory instead of the shipped ones.
    #[arg(long)]
    pub gadgets: Option<PathBuf>,
    /// Random instances per polynomial classifier example.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Solve(a) => commands::solve(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Kplumber(a) => commands::kplumber(a),
        Command::Tile(a) => commands::tile(a),
        Command::VerifySuite(a) => commands::verify_suite(a, cli.seed.unwrap_or(0)),
    };
    match outcome {
        Ok(mut o) => {
            o.report.seed = o.report.seed.or(cli.seed);
            match cli.format {
                Format::Json => println!("{}", o.report.json()),
                Format::Text => print!("{}", o.report.text()),
            }
            ExitCode::from(o.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
