use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use uncoupled::analysis::{check_lemma12, decide_success, node_count, Outcome, DEFAULT_NODE_BUDGET};
use uncoupled::dynamics::{StrategyMapping, StrategyVector};
use uncoupled::generators::{
    enumerate_structures, random_game, realize_game, EnumerationSpec, GameClass,
    DEFAULT_STRUCTURE_CAP,
};
use uncoupled::io::{GameFile, StructureFile};
use uncoupled::{BestReplyStructure, Game, ProfileSpace};

use crate::report::{Expect, Expectation, Report};
use crate::source::{Size, StrategyArgs};
use crate::{CliError, CliResult, Status};

/// Games handed to the worker pool at a time; results are written in index
/// order after each batch.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Decide self-stabilization of `--strategy`.
    SelfStabilization,
    /// Two-player generic games without strictly dominant actions: under `h`,
    /// every profile is reachable from every non-equilibrium profile.
    Lemma12,
}

impl Check {
    fn as_str(self) -> &'static str {
        match self {
            Check::SelfStabilization => "self-stabilization",
            Check::Lemma12 => "lemma12",
        }
    }
}

/// Which per-game records to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Records {
    All,
    Failures,
    None,
}

#[derive(Args, Debug, Clone)]
pub struct EnumerateArgs {
    /// Action counts, e.g. 2,2,3.
    #[arg(long)]
    pub size: Size,

    /// `all` (any nonempty best-reply sets) or `generic` (single best replies).
    #[arg(long, default_value = "all")]
    pub class: GameClass,

    #[command(flatten)]
    pub strategy: StrategyArgs,

    #[arg(long, value_enum, default_value = "self-stabilization")]
    pub check: Check,

    /// Check this many seeded samples instead of every structure.
    #[arg(long)]
    pub samples: Option<usize>,

    /// With `--samples`: random integer-payoff games instead of structures.
    #[arg(long, requires = "samples")]
    pub random: bool,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Refuse exhaustive runs over more structures than this.
    #[arg(long, default_value_t = DEFAULT_STRUCTURE_CAP)]
    pub cap: u128,

    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget_nodes: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "all")]
    pub records: Records,

    #[arg(long, value_enum, default_value = "pass")]
    pub expect: Expect,
}

impl EnumerateArgs {
    pub fn new(size: &[usize], class: GameClass) -> Self {
        Self {
            size: Size(size.to_vec()),
            class,
            strategy: StrategyArgs::default(),
            check: Check::SelfStabilization,
            samples: None,
            random: false,
            seed: 0,
            cap: DEFAULT_STRUCTURE_CAP,
            workers: 0,
            budget_nodes: DEFAULT_NODE_BUDGET,
            out: None,
            records: Records::Failures,
            expect: Expect::Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    pub record: &'static str,
    pub command: &'static str,
    pub size: Vec<usize>,
    pub class: GameClass,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub check: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    pub total: u128,
    pub pass: u128,
    pub fail: u128,
    pub no_pne: u128,
    /// Games outside the preconditions of the lemma12 check.
    pub skipped: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<u128>,
    pub expected: &'static str,
    pub expectation_met: bool,
}

#[derive(Serialize)]
struct GameRecord {
    record: &'static str,
    index: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qualifies: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<StructureFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    game: Option<GameFile>,
    #[serde(skip)]
    failed: bool,
}

enum Item {
    Structure(BestReplyStructure),
    Random(u64),
}

struct Job {
    space: ProfileSpace,
    class: GameClass,
    check: Check,
    mapping: Option<Arc<dyn StrategyMapping>>,
    budget: usize,
}

impl Job {
    fn run(&self, index: u128, item: &Item) -> CliResult<GameRecord> {
        let game: Game = match item {
            Item::Structure(s) => realize_game(s),
            Item::Random(seed) => random_game(&self.space, *seed, self.class)?,
        };
        let mut record = GameRecord {
            record: "game",
            index,
            outcome: None,
            qualifies: None,
            holds: None,
            witness: None,
            structure: None,
            game: None,
            failed: false,
        };
        match self.check {
            Check::SelfStabilization => {
                let mapping = self.mapping.as_ref().expect("checked before the run");
                let strategy = StrategyVector::build(mapping.as_ref(), &game)?;
                let verdict = decide_success(&strategy, &game, self.budget)?;
                record.outcome = Some(verdict.outcome);
                record.failed = !verdict.outcome.succeeds();
                record.witness = verdict.witness.as_ref().map(|w| {
                    w.state
                        .profiles(game.space())
                        .iter()
                        .map(|p| p.one_based())
                        .collect()
                });
            }
            Check::Lemma12 => {
                let qualifies = game.is_generic()
                    && (0..2).all(|i| matches!(game.strictly_dominant_action(i), Ok(None)));
                record.qualifies = Some(qualifies);
                if qualifies {
                    let holds = check_lemma12(&game)?;
                    record.holds = Some(holds);
                    record.failed = !holds;
                }
            }
        }
        if record.failed {
            match item {
                Item::Structure(s) => record.structure = Some(StructureFile::from_structure(s)),
                Item::Random(_) => record.game = Some(GameFile::from_game(&game)),
            }
        }
        Ok(record)
    }
}

/// Runs the enumeration, writing per-game records (as selected by
/// `args.records`) and the summary to `records`.
pub fn run_enumeration(args: &EnumerateArgs, records: &mut dyn Write) -> CliResult<EnumerationSummary> {
    let space = args.size.space()?;
    let mapping = match args.check {
        Check::SelfStabilization => {
            let mapping = args.strategy.mapping(&space)?;
            node_count(&space, mapping.recall(), args.budget_nodes)?;
            Some(mapping)
        }
        Check::Lemma12 => {
            if space.players() != 2 {
                return Err(CliError::Usage(format!(
                    "the lemma12 check is for two-player games, size {space} has {} players",
                    space.players()
                )));
            }
            None
        }
    };
    let (mode, items): (&'static str, Box<dyn Iterator<Item = Item> + Send>) =
        match (args.samples, args.random) {
            (Some(count), true) => {
                let seed = args.seed;
                ("random", Box::new((0..count as u64).map(move |i| Item::Random(seed.wrapping_add(i)))))
            }
            (Some(count), false) => {
                let spec = EnumerationSpec::sampled(space.clone(), args.class, count, args.seed);
                ("sampled", Box::new(enumerate_structures(&spec)?.map(Item::Structure)))
            }
            (None, _) => {
                let spec = EnumerationSpec::exhaustive(space.clone(), args.class).with_cap(args.cap);
                ("exhaustive", Box::new(enumerate_structures(&spec)?.map(Item::Structure)))
            }
        };
    let job = Job {
        space: space.clone(),
        class: args.class,
        check: args.check,
        mapping,
        budget: args.budget_nodes,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;

    let mut report = Report::open(None, records)?;
    let mut summary = EnumerationSummary {
        record: "summary",
        command: "enumerate",
        size: space.action_counts().to_vec(),
        class: args.class,
        mode,
        seed: (mode != "exhaustive").then_some(args.seed),
        check: args.check.as_str(),
        strategy: job.mapping.as_ref().map(|m| m.name()),
        total: 0,
        pass: 0,
        fail: 0,
        no_pne: 0,
        skipped: 0,
        first_failure: None,
        expected: Expectation::from(args.expect).as_str(),
        expectation_met: false,
    };
    let mut items = items.enumerate();
    loop {
        let batch: Vec<(usize, Item)> = items.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let results: Vec<CliResult<GameRecord>> = pool.install(|| {
            batch
                .par_iter()
                .map(|(i, item)| job.run(*i as u128, item))
                .collect()
        });
        for result in results {
            let rec = result?;
            summary.total += 1;
            if rec.qualifies == Some(false) {
                summary.skipped += 1;
            } else if rec.failed {
                summary.fail += 1;
                summary.first_failure.get_or_insert(rec.index);
            } else {
                summary.pass += 1;
            }
            if rec.outcome == Some(Outcome::NoPne) {
                summary.no_pne += 1;
            }
            let keep = match args.records {
                Records::All => true,
                Records::Failures => rec.failed,
                Records::None => false,
            };
            if keep {
                report.record(&rec)?;
            }
        }
    }
    summary.expectation_met = match args.expect {
        Expect::Pass => summary.fail == 0,
        Expect::Fail => summary.fail > 0,
    };
    report.record(&summary)?;
    report.finish()?;
    Ok(summary)
}

pub(crate) fn run(args: &EnumerateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<Status> {
    let summary = match &args.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            run_enumeration(args, &mut file)?
        }
        None => run_enumeration(args, stdout)?,
    };
    let what = summary.strategy.as_deref().unwrap_or(summary.check);
    let _ = writeln!(
        stderr,
        "{} {:?} {} {what}: {} checked, {} pass, {} fail, {} skipped (expected {}, {})",
        summary.mode,
        summary.size,
        match summary.class {
            GameClass::All => "all",
            GameClass::Generic => "generic",
        },
        summary.total,
        summary.pass,
        summary.fail,
        summary.skipped,
        summary.expected,
        if summary.expectation_met { "met" } else { "NOT met" }
    );
    Ok(if summary.expectation_met {
        Status::Met
    } else {
        Status::Failed
    })
}
