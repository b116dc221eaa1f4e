//! The `uncoupled` command line: verify single games, sweep whole classes of
//! best-reply structures, simulate seeded runs and export games and graphs.
//!
//! Every command writes JSON lines (one record per checked game, then a
//! `summary` record) to `--out` or standard output, and a one-line human
//! summary to standard error.
//!
//! Exit codes: 0 expectation met, 1 verification failure, 2 usage error,
//! 3 resource budget exceeded.

mod enumerate;
mod export;
mod report;
mod simulate;
mod source;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use enumerate::{run_enumeration, Check, EnumerateArgs, EnumerationSummary};
pub use export::ExportArgs;
pub use report::Expect;
pub use simulate::SimulateArgs;
pub use source::{GameSource, Size, StrategyArgs, StrategyName};
pub use verify::VerifyArgs;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum Status {
    Met = 0,
    Failed = 1,
    Usage = 2,
    Resource = 3,
}

/// An error that ends a command before any verdict.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Usage(_) => Status::Usage,
            CliError::Resource(_) => Status::Resource,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<uncoupled::Error> for CliError {
    fn from(e: uncoupled::Error) -> Self {
        match e {
            uncoupled::Error::Resource { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "uncoupled", version, about = "Exact self-stabilization checks for uncoupled game dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a strategy self-stabilizes on one game.
    Verify(VerifyArgs),
    /// Run a check over every (or a sample of) best-reply structure of a size.
    Enumerate(EnumerateArgs),
    /// Sample seeded runs of a strategy.
    Simulate(SimulateArgs),
    /// Write a game file and optionally its transition graph.
    Export(ExportArgs),
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                Status::Usage
            } else {
                let _ = write!(stdout, "{e}");
                Status::Met
            };
            return code as i32;
        }
    };
    let result = match cli.command {
        Command::Verify(args) => verify::run(&args, stdout, stderr),
        Command::Enumerate(args) => enumerate::run(&args, stdout, stderr),
        Command::Simulate(args) => simulate::run(&args, stdout, stderr),
        Command::Export(args) => export::run(&args, stdout, stderr),
    };
    match result {
        Ok(status) => status as i32,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.status() as i32
        }
    }
}
