//! `tait`: count Tait colorings of planar triangulations, cross-check the
//! counting routes, and benchmark the α enumeration.

mod bench;
mod count;
mod graph;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::graph::GraphArgs;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_DISAGREEMENT: u8 = 4;

/// Writes to stdout; a closed pipe (`tait ... | head`) is not an error.
pub fn emit(text: impl std::fmt::Display) {
    let _ = write!(std::io::stdout().lock(), "{text}");
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tait", version, about = "Exact Tait coloring counts for planar triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Alpha,
    Brute,
    Heawood,
    All,
}

impl Method {
    pub fn expand(self) -> Vec<Method> {
        match self {
            Method::All => vec![Method::Alpha, Method::Brute, Method::Heawood],
            m => vec![m],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Alpha => "alpha",
            Method::Brute => "brute",
            Method::Heawood => "heawood",
            Method::All => "all",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count Tait colorings (reported as Tait₀ = Tait / 3) and print a JSON report
    Count(count::CountArgs),
    /// Run the oracle check suites
    Verify(verify::VerifyArgs),
    /// Print a generated triangulation in rotation-system format
    Gen(GenArgs),
    /// Sweep graphs, methods and thread counts; print CSV
    Bench(bench::BenchArgs),
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    #[command(flatten)]
    graph: GraphArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Count(args) => count::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Gen(args) => args.graph.load().map(|(g, _)| emit(g.to_rotation_text())),
        Command::Bench(args) => bench::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
