//! `fine`: count, enumerate, map, verify and draw generalized Fine structures.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fine_core::{Error, Limits};

pub const EXIT_FAILURE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;
pub const LIMITS_ENV: &str = "FINE_LIMITS";

#[derive(Parser, Debug)]
#[command(name = "fine", version, about = "Generalized Fine sequences, succession trees and their bijections")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Lift all size limits, including any from the FINE_LIMITS variable.
    #[arg(long, global = true)]
    unsafe_limits: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the size of a family.
    Count(CountArgs),
    /// List the members of a family in canonical order.
    Enumerate(Selector),
    /// Carry objects from one family to another.
    Map(MapArgs),
    /// Run an oracle comparison and report.
    Verify(VerifyArgs),
    /// Draw a generating tree.
    Tree(TreeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Generalized Fine words, with --p and --q.
    Words,
    /// Permutations avoiding --set.
    Avoiders,
    /// Derangements avoiding 321.
    Derangements321,
    /// Dyck paths.
    Paths,
}

#[derive(Args, Debug)]
pub struct Selector {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Built-in set name (F1..H5) or patterns separated by ';'.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub selector: Selector,
    /// Print both the formula and the oracle count and compare them.
    #[arg(long)]
    pub both: bool,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Source: a family (F1..H5, DER, WORD(p,q)), `relation` or `dyck`.
    #[arg(long)]
    pub from: String,
    /// Target, as for --from.
    #[arg(long)]
    pub to: String,
    /// Object to map; one object per line is read from stdin when absent.
    #[arg(long)]
    pub input: Option<String>,
    /// Also map back and fail unless the input is recovered.
    #[arg(long)]
    pub roundtrip: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// shapiro, formula, thm1..thm4, succession:<family> or bijection:<from>:<to>.
    #[arg(long)]
    pub check: String,
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    /// Object-level tree of a family.
    #[arg(long, conflicts_with = "system")]
    pub family: Option<String>,
    /// Label-level tree of a succession system; `d1` takes --p and --q.
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
}

/// Everything a command can fail with, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
    /// A complete report whose checks did not all pass.
    FailedReport(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedPair { .. } | Error::Consistency(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// `perm=10,word=16,depth=9,derangement=11`; unknown keys are rejected.
pub fn parse_limits(spec: &str) -> CliResult<Limits> {
    let mut lim = Limits::default();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("{LIMITS_ENV}: expected key=value, got {item:?}")))?;
        let v: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("{LIMITS_ENV}: bad number in {item:?}")))?;
        match k.trim() {
            "perm" => lim.perm = v,
            "derangement" => lim.derangement = v,
            "word" => lim.word = v,
            "depth" => lim.depth = v,
            other => return Err(CliError::Usage(format!("{LIMITS_ENV}: unknown limit {other:?}"))),
        }
    }
    Ok(lim)
}

fn limits(unsafe_limits: bool) -> CliResult<Limits> {
    if unsafe_limits {
        return Ok(Limits::unbounded());
    }
    match std::env::var(LIMITS_ENV) {
        Ok(spec) => parse_limits(&spec),
        Err(_) => Ok(Limits::default()),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    let lim = limits(cli.unsafe_limits)?;
    match cli.command {
        Command::Count(a) => commands::count(&a, cli.format, &lim),
        Command::Enumerate(s) => commands::enumerate(&s, cli.format, &lim),
        Command::Map(a) => commands::map(&a, cli.format),
        Command::Verify(a) => report::verify(&a, cli.format, &lim),
        Command::Tree(a) => commands::tree(&a, cli.format, &lim),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(CliError::FailedReport(out)) => {
            print!("{out}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
