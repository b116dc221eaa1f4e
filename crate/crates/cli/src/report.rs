use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use uncoupled::analysis::Outcome;

use crate::CliResult;

/// What the run is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    /// No checked game fails.
    Pass,
    /// At least one checked game fails.
    Fail,
}

/// Resolved expectation for a single verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Expectation {
    Exactly(Outcome),
    Succeeds,
    Fails,
}

impl Expectation {
    pub fn met(self, outcome: Outcome) -> bool {
        match self {
            Expectation::Exactly(o) => o == outcome,
            Expectation::Succeeds => outcome.succeeds(),
            Expectation::Fails => !outcome.succeeds(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Expectation::Exactly(o) => o.as_str(),
            Expectation::Succeeds => "pass",
            Expectation::Fails => "fail",
        }
    }
}

impl From<Expect> for Expectation {
    fn from(e: Expect) -> Self {
        match e {
            Expect::Pass => Expectation::Succeeds,
            Expect::Fail => Expectation::Fails,
        }
    }
}

/// JSON-lines sink: a file when `--out` is given, else the caller's stdout.
pub(crate) struct Report<'a> {
    inner: Box<dyn Write + 'a>,
}

impl<'a> Report<'a> {
    pub fn open(out: Option<&Path>, stdout: &'a mut dyn Write) -> CliResult<Self> {
        let inner: Box<dyn Write + 'a> = match out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
                crate::CliError::Usage(format!("cannot create {}: {e}", path.display()))
            })?)),
            None => Box::new(BufWriter::new(stdout)),
        };
        Ok(Self { inner })
    }

    pub fn record<T: Serialize>(&mut self, record: &T) -> CliResult<()> {
        serde_json::to_writer(&mut self.inner, record).expect("records serialize");
        self.inner.write_all(b"\n")?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| crate::CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
