mod commands;
mod input;
mod output;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qlat", version, about = "Exact quadratic 1D quasilattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasilattice points and tile word over an index window.
    Generate(Common),
    /// Geometric spec to floor form and back.
    Convert(Common),
    /// Apply a catalog substitution rule to a word, or glue it back.
    Substitute(Common),
    /// Read the canonical substitution rule off two bases of one lattice.
    DeriveRule(Common),
    /// Basis checks, frequencies, self-similarity and inflation data.
    Analyze(Common),
    /// F_s, N_s and s-cycle counts for a basis change.
    CountCycles(Common),
    /// The catalog of ten self-similar cases or the cycle-count table.
    Tables(Common),
    /// SVG tick diagrams of a quasilattice, its bi-grid, or a rule.
    Render(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Catalog case (1, 2a, ..., 4d); count-cycles also takes a family 1..4.
    #[arg(long)]
    pub case: Option<String>,
    /// Basis change as a,b,c,d.
    #[arg(long)]
    pub tau: Option<String>,
    /// Geometric spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Floor-form parameter JSON file.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Offset par,perp for a catalog case.
    #[arg(long, allow_hyphen_values = true)]
    pub q0: Option<String>,
    /// Index window lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub s_max: Option<u32>,
    /// Rounding signs for singular lines, e.g. +-.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tile word, e.g. LSLLS (lowercase s/l mark half tiles).
    #[arg(long)]
    pub word: Option<String>,
    /// Generation method.
    #[arg(long, value_enum, default_value_t = Method::CutAndProject)]
    pub method: Method,
    /// Glue instead of decorate.
    #[arg(long)]
    pub inverse: bool,
    /// Which table.
    #[arg(long, value_enum)]
    pub which: Option<Table>,
    /// Figure kind.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Tsv,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    CutAndProject,
    Dualize,
    Torus,
    Floorform,
    Form1,
    Form2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    #[value(name = "catalog", alias = "1")]
    Catalog,
    #[value(name = "cycles", alias = "2")]
    Cycles,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Ticks,
    Bigrid,
    Rule,
}

/// Failure of a run: bad invocation or an engine error.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(qlat::Error),
}

impl From<qlat::Error> for Failure {
    fn from(e: qlat::Error) -> Self {
        Failure::Domain(e)
    }
}

pub type Run<T> = std::result::Result<T, Failure>;

pub fn usage<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", output::error_record("Usage", first));
            return ExitCode::from(2);
        }
    };
    let (args, result) = match &cli.command {
        Command::Generate(a) => (a, commands::generate(a)),
        Command::Convert(a) => (a, commands::convert(a)),
        Command::Substitute(a) => (a, commands::substitute(a)),
        Command::DeriveRule(a) => (a, commands::derive_rule(a)),
        Command::Analyze(a) => (a, commands::analyze(a)),
        Command::CountCycles(a) => (a, commands::count_cycles(a)),
        Command::Tables(a) => (a, commands::tables(a)),
        Command::Render(a) => (a, commands::render(a)),
    };
    let written = result.and_then(|text| output::emit(args.out.as_deref(), &text));
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", output::error_record("Usage", &msg));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", output::error_record(e.name(), &e.to_string()));
            ExitCode::from(1)
        }
    }
}
