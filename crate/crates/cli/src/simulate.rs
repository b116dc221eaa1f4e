use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use uncoupled::analysis::simulate_stream;
use uncoupled::dynamics::{RecallState, StrategyVector};
use uncoupled::io::TraceRecord;
use uncoupled::Profile;

use crate::report::Report;
use crate::source::{parse_profiles, resolve_game, GameSource, StrategyArgs};
use crate::{CliError, CliResult, Status};

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: GameSource,

    #[command(flatten)]
    pub strategy: StrategyArgs,

    /// Initial recall state, oldest profile first, e.g. "1,1,2;1,2,1". A
    /// single profile is repeated to fill the recall. Default: all ones.
    #[arg(long)]
    pub initial: Option<String>,

    /// Maximum number of profiles to sample per run.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Independent runs; run `j` uses generator stream `j`.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Summary<'a> {
    record: &'static str,
    command: &'static str,
    game: &'a str,
    strategy: &'a str,
    runs: u64,
    absorbed: u64,
    absorbed_at_pne: u64,
    max_steps: usize,
}

pub(crate) fn run(args: &SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<Status> {
    let resolved = resolve_game(&args.source, args.seed)?;
    let game = &resolved.game;
    let space = game.space();
    let mapping = args.strategy.mapping(space)?;
    let strategy = StrategyVector::build(mapping.as_ref(), game)?;
    let recall = strategy.recall();
    let mut profiles = match &args.initial {
        Some(s) => parse_profiles(s)?,
        None => vec![Profile(vec![0; space.players()])],
    };
    if profiles.len() == 1 {
        profiles = vec![profiles[0].clone(); recall];
    }
    if profiles.len() != recall {
        return Err(CliError::Usage(format!(
            "initial state has {} profiles, {} needs {recall}",
            profiles.len(),
            strategy.name()
        )));
    }
    let initial = RecallState::new(space, &profiles)?;

    let mut report = Report::open(args.out.as_deref(), stdout)?;
    let (mut absorbed, mut at_pne, mut max_steps) = (0, 0, 0);
    for stream in 0..args.runs {
        let trace = simulate_stream(&strategy, &initial, args.steps, args.seed, stream)?;
        if trace.absorbed {
            absorbed += 1;
            let last = trace.run().last().expect("runs are nonempty");
            if game.is_pne_at(last) {
                at_pne += 1;
            }
        }
        max_steps = max_steps.max(trace.steps());
        report.record(&TraceRecord::new(Some(&resolved.label), strategy.name(), space, &trace))?;
    }
    report.record(&Summary {
        record: "summary",
        command: "simulate",
        game: &resolved.label,
        strategy: strategy.name(),
        runs: args.runs,
        absorbed,
        absorbed_at_pne: at_pne,
        max_steps,
    })?;
    report.finish()?;
    let _ = writeln!(
        stderr,
        "{} {}: {absorbed}/{} runs absorbed ({at_pne} at a PNE), longest {max_steps} steps",
        resolved.label,
        strategy.name(),
        args.runs
    );
    Ok(Status::Met)
}
