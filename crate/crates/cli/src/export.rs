use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use uncoupled::analysis::{build_graph, DEFAULT_NODE_BUDGET};
use uncoupled::dynamics::StrategyVector;
use uncoupled::io::{game_to_string, StructureFile};

use crate::report::write_file;
use crate::source::{resolve_game, GameSource, StrategyArgs};
use crate::{CliResult, Status};

#[derive(Args, Debug, Clone)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: GameSource,

    #[command(flatten)]
    pub strategy: StrategyArgs,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Game file path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the best-reply structure.
    #[arg(long)]
    pub structure: Option<PathBuf>,

    /// Also write the transition graph of `--strategy` in Graphviz format.
    #[arg(long)]
    pub dot: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget_nodes: usize,
}

pub(crate) fn run(args: &ExportArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<Status> {
    let resolved = resolve_game(&args.source, args.seed)?;
    let game = resolved.game.clone().with_name(resolved.label.clone());
    let text = game_to_string(&game);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.structure {
        let file = StructureFile::from_structure(&game.best_reply_structure());
        write_file(path, &(serde_json::to_string(&file).expect("structures serialize") + "\n"))?;
    }
    if let Some(path) = &args.dot {
        let mapping = args.strategy.mapping(game.space())?;
        let strategy = StrategyVector::build(mapping.as_ref(), &game)?;
        let graph = build_graph(&strategy, &game, args.budget_nodes)?;
        write_file(path, &graph.to_dot(&resolved.label))?;
        let _ = writeln!(
            stderr,
            "{}: {} nodes, {} edges under {}",
            resolved.label,
            graph.node_count(),
            graph.edge_count(),
            strategy.name()
        );
    }
    Ok(Status::Met)
}
