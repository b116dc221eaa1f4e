use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use uncoupled::dynamics::{
    CanonicalH, ExtendedRecall, MinBestReply, PadAction, PadPlayer, QueryProtocol2, QueryProtocol3,
    StrategyMapping,
};
use uncoupled::fixtures::{Fixture, FixtureKind};
use uncoupled::generators::{random_game, GameClass};
use uncoupled::io::parse_game;
use uncoupled::{Game, Profile, ProfileSpace};

use crate::{CliError, CliResult};

/// Comma-separated action counts, such as `2,2,3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Size(pub Vec<usize>);

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_list(s).map(Size)
    }
}

impl Size {
    pub fn space(&self) -> CliResult<ProfileSpace> {
        Ok(ProfileSpace::new(self.0.clone())?)
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("{t:?} is not a non-negative integer"))
        })
        .collect()
}

/// Profiles in 1-based notation, `;` between profiles and `,` between actions.
pub(crate) fn parse_profiles(s: &str) -> CliResult<Vec<Profile>> {
    s.split(';')
        .map(|p| {
            let actions = parse_list(p).map_err(CliError::Usage)?;
            Profile::from_one_based(&actions).map_err(CliError::from)
        })
        .collect()
}

#[derive(Args, Debug, Clone, Default)]
pub struct GameSource {
    /// Built-in game: lemma10, lemma14, lemma15, theorem18-u or theorem18-uprime.
    #[arg(long, conflicts_with_all = ["game", "random"])]
    pub fixture: Option<String>,

    /// Fixture parameters, comma separated (defaults per fixture).
    #[arg(long, value_delimiter = ',', requires = "fixture")]
    pub params: Vec<usize>,

    /// Game file in JSON.
    #[arg(long, conflicts_with = "random")]
    pub game: Option<PathBuf>,

    /// Random integer-payoff game of this size, drawn with `--seed`.
    #[arg(long, value_name = "SIZE")]
    pub random: Option<Size>,

    /// With `--random`: draw until the game is generic.
    #[arg(long, requires = "random")]
    pub generic: bool,
}

/// A game ready to check, with its fixture annotations if any.
pub(crate) struct Resolved {
    pub label: String,
    pub game: Game,
    pub fixture: Option<Fixture>,
}

pub(crate) fn resolve_game(source: &GameSource, seed: u64) -> CliResult<Resolved> {
    if let Some(name) = &source.fixture {
        let kind: FixtureKind = name.parse()?;
        let fixture = Fixture::load(kind, &source.params)?;
        let label = if fixture.params.is_empty() {
            kind.to_string()
        } else {
            let ps: Vec<String> = fixture.params.iter().map(|p| p.to_string()).collect();
            format!("{kind}({})", ps.join(","))
        };
        return Ok(Resolved {
            label,
            game: fixture.game.clone(),
            fixture: Some(fixture),
        });
    }
    if let Some(path) = &source.game {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let game = parse_game(&text)?;
        let label = game
            .name()
            .map(str::to_owned)
            .unwrap_or_else(|| path.display().to_string());
        return Ok(Resolved {
            label,
            game,
            fixture: None,
        });
    }
    if let Some(size) = &source.random {
        let space = size.space()?;
        let class = if source.generic {
            GameClass::Generic
        } else {
            GameClass::All
        };
        let game = random_game(&space, seed, class)?;
        return Ok(Resolved {
            label: format!("random({space},seed={seed})"),
            game,
            fixture: None,
        });
    }
    Err(CliError::Usage(
        "no game given; use --fixture, --game or --random".into(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    H,
    Det3,
    Det2,
    PadAction,
    PadPlayer,
    MinBr,
}

impl StrategyName {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyName::H => "h",
            StrategyName::Det3 => "det3",
            StrategyName::Det2 => "det2",
            StrategyName::PadAction => "pad-action",
            StrategyName::PadPlayer => "pad-player",
            StrategyName::MinBr => "min-br",
        }
    }
}

/// Historyless mappings usable under the padding reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseName {
    H,
    MinBr,
}

#[derive(Args, Debug, Clone)]
pub struct StrategyArgs {
    #[arg(long, value_enum, default_value = "h")]
    pub strategy: StrategyName,

    /// Historyless mapping run on the padded space by pad-action and pad-player.
    #[arg(long, value_enum, default_value = "h")]
    pub base: BaseName,

    /// Player (1-based) that gets the duplicate action under pad-action; default last.
    #[arg(long)]
    pub pad_index: Option<usize>,

    /// Action count of the added player under pad-player.
    #[arg(long, default_value_t = 2)]
    pub extra_actions: usize,

    /// Run the strategy with a longer recall than it needs.
    #[arg(long)]
    pub recall: Option<usize>,
}

impl Default for StrategyArgs {
    fn default() -> Self {
        Self {
            strategy: StrategyName::H,
            base: BaseName::H,
            pad_index: None,
            extra_actions: 2,
            recall: None,
        }
    }
}

impl StrategyArgs {
    pub fn named(strategy: StrategyName) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }

    /// Key for fixture expectations. A longer recall does not change whether a
    /// strategy self-stabilizes, so it keeps the key of the plain strategy.
    pub(crate) fn expectation_key(&self) -> Option<&'static str> {
        match self.strategy {
            StrategyName::PadAction | StrategyName::PadPlayer => None,
            s => Some(s.as_str()),
        }
    }

    /// Builds the mapping and checks it is defined on `space`.
    pub fn mapping(&self, space: &ProfileSpace) -> CliResult<Arc<dyn StrategyMapping>> {
        let base: Arc<dyn StrategyMapping> = match self.base {
            BaseName::H => Arc::new(CanonicalH),
            BaseName::MinBr => Arc::new(MinBestReply),
        };
        let mapping: Arc<dyn StrategyMapping> = match self.strategy {
            StrategyName::H => Arc::new(CanonicalH),
            StrategyName::MinBr => Arc::new(MinBestReply),
            StrategyName::Det3 => Arc::new(QueryProtocol3),
            StrategyName::Det2 => Arc::new(QueryProtocol2),
            StrategyName::PadAction => {
                let player = match self.pad_index {
                    Some(0) => return Err(CliError::Usage("--pad-index is 1-based".into())),
                    Some(i) => i - 1,
                    None => space.players() - 1,
                };
                space.check_player(player)?;
                Arc::new(PadAction::new(base, player)?)
            }
            StrategyName::PadPlayer => Arc::new(PadPlayer::new(base, self.extra_actions)?),
        };
        let mapping = match self.recall {
            Some(r) if r != mapping.recall() => Arc::new(ExtendedRecall::new(mapping, r)?),
            _ => mapping,
        };
        mapping.supports(space)?;
        Ok(mapping)
    }
}
