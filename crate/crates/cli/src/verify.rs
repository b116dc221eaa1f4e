use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use uncoupled::analysis::{build_graph, decide_on_graph, node_count, Outcome, DEFAULT_NODE_BUDGET};
use uncoupled::dynamics::{RecallState, StrategyVector};
use uncoupled::io::VerdictRecord;

use crate::report::{write_file, Expect, Expectation, Report};
use crate::source::{resolve_game, GameSource, StrategyArgs};
use crate::{CliResult, Status};

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GameSource,

    #[command(flatten)]
    pub strategy: StrategyArgs,

    /// Seed for `--random` games.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Largest transition graph to build.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget_nodes: usize,

    /// Write the transition graph in Graphviz format.
    #[arg(long)]
    pub dot: Option<PathBuf>,

    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Override the expected outcome. Fixtures carry their own; other games
    /// default to pass.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    #[serde(flatten)]
    verdict: VerdictRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    annotated_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    annotated_witness_fails: Option<bool>,
    expected: &'a str,
    expectation_met: bool,
}

#[derive(Serialize)]
struct Summary<'a> {
    record: &'static str,
    command: &'static str,
    game: &'a str,
    strategy: &'a str,
    nodes: usize,
    edges: usize,
    outcome: Outcome,
    expected: &'a str,
    expectation_met: bool,
}

pub(crate) fn run(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<Status> {
    let resolved = resolve_game(&args.source, args.seed)?;
    let game = &resolved.game;
    let mapping = args.strategy.mapping(game.space())?;
    let strategy = StrategyVector::build(mapping.as_ref(), game)?;
    node_count(game.space(), strategy.recall(), args.budget_nodes)?;

    let expectation = match (args.expect, &resolved.fixture) {
        (Some(e), _) => e.into(),
        (None, Some(f)) => args
            .strategy
            .expectation_key()
            .and_then(|k| f.expected_outcome(k))
            .map_or(Expectation::Succeeds, Expectation::Exactly),
        (None, None) => Expectation::Succeeds,
    };

    let graph = build_graph(&strategy, game, args.budget_nodes)?;
    let verdict = decide_on_graph(&graph, game);
    if let Some(path) = &args.dot {
        write_file(path, &graph.to_dot(&resolved.label))?;
    }

    let annotated = resolved.fixture.as_ref().and_then(|f| f.witness.clone());
    let annotated_fails = match &annotated {
        Some(p) => Some(verdict.fails_from(&RecallState::repeated(game.space(), p, strategy.recall())?)),
        None => None,
    };
    let met = expectation.met(verdict.outcome);
    let name = strategy.name().to_owned();

    let mut report = Report::open(args.out.as_deref(), stdout)?;
    report.record(&VerifyRecord {
        verdict: VerdictRecord::new(Some(&resolved.label), &name, &verdict),
        annotated_witness: annotated.as_ref().map(|p| p.one_based()),
        annotated_witness_fails: annotated_fails,
        expected: expectation.as_str(),
        expectation_met: met,
    })?;
    report.record(&Summary {
        record: "summary",
        command: "verify",
        game: &resolved.label,
        strategy: &name,
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        outcome: verdict.outcome,
        expected: expectation.as_str(),
        expectation_met: met,
    })?;
    report.finish()?;

    let witness = verdict
        .witness
        .as_ref()
        .map(|w| format!(" from {}", w.state.display(game.space())))
        .unwrap_or_default();
    let _ = writeln!(
        stderr,
        "{} {}: {}{witness} (expected {}, {})",
        resolved.label,
        name,
        verdict.outcome.as_str(),
        expectation.as_str(),
        if met { "met" } else { "NOT met" }
    );
    Ok(if met { Status::Met } else { Status::Failed })
}
