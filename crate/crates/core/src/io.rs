//! File formats and report records. Everything here is JSON with 1-based actions.
//!
//! A game file looks like
//!
//! ```json
//! { "name": "pd", "players": 2, "actions": [2, 2],
//!   "payoffs": [[3, 0, 5, 1], [3, 5, 0, 1]] }
//! ```
//!
//! with one flat row-major tensor per player (last player fastest).

use serde::{Deserialize, Serialize};

use crate::analysis::{Outcome, Trace, Verdict};
use crate::error::{invalid, Error, Result};
use crate::game::{ActionSet, BestReplyStructure, Game, ProfileSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub players: usize,
    pub actions: Vec<usize>,
    pub payoffs: Vec<Vec<i64>>,
}

impl GameFile {
    pub fn from_game(game: &Game) -> Self {
        Self {
            name: game.name().map(str::to_owned),
            players: game.space().players(),
            actions: game.space().action_counts().to_vec(),
            payoffs: game.payoffs().to_vec(),
        }
    }

    pub fn into_game(self) -> Result<Game> {
        if self.players != self.actions.len() {
            return Err(invalid(format!(
                "players is {} but {} action counts were given",
                self.players,
                self.actions.len()
            )));
        }
        let game = Game::new(ProfileSpace::new(self.actions)?, self.payoffs)?;
        Ok(match self.name {
            Some(name) => game.with_name(name),
            None => game,
        })
    }
}

pub fn parse_game(text: &str) -> Result<Game> {
    let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_game()
}

pub fn game_to_string(game: &Game) -> String {
    serde_json::to_string_pretty(&GameFile::from_game(game)).expect("game files serialize") + "\n"
}

/// Best-reply structure as nested 1-based action-set arrays: per player, per
/// opponent sub-profile (row-major over the other players).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub actions: Vec<usize>,
    pub best_replies: Vec<Vec<Vec<usize>>>,
}

impl StructureFile {
    pub fn from_structure(structure: &BestReplyStructure) -> Self {
        Self {
            actions: structure.space().action_counts().to_vec(),
            best_replies: structure
                .tables()
                .iter()
                .map(|t| t.iter().map(|s| s.iter().map(|a| a + 1).collect()).collect())
                .collect(),
        }
    }

    pub fn into_structure(self) -> Result<BestReplyStructure> {
        let space = ProfileSpace::new(self.actions)?;
        let tables = self
            .best_replies
            .into_iter()
            .map(|t| {
                t.into_iter()
                    .map(|set| {
                        if set.iter().any(|&a| a == 0 || a > crate::game::MAX_ACTIONS) {
                            return Err(invalid(format!("action set {set:?} is not 1-based")));
                        }
                        Ok(set.into_iter().map(|a| a - 1).collect::<ActionSet>())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BestReplyStructure::new(space, tables)
    }
}

pub fn parse_structure(text: &str) -> Result<BestReplyStructure> {
    let file: StructureFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_structure()
}

type State1 = Vec<Vec<usize>>;

fn state_of(verdict: &Verdict, node: usize) -> State1 {
    verdict
        .decode(node)
        .profiles(&verdict.space)
        .iter()
        .map(|p| p.one_based())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub record: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub game: Option<String>,
    pub strategy: String,
    pub recall: usize,
    pub outcome: Outcome,
    pub pne: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<State1>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_reachable: Option<Vec<State1>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_states: Option<usize>,
}

impl VerdictRecord {
    pub fn new(game: Option<&str>, strategy: &str, verdict: &Verdict) -> Self {
        let witness = verdict.witness.as_ref();
        Self {
            record: "verdict",
            game: game.map(str::to_owned),
            strategy: strategy.to_owned(),
            recall: verdict.recall,
            outcome: verdict.outcome,
            pne: verdict.pne.iter().map(|p| p.one_based()).collect(),
            witness: witness.map(|w| state_of(verdict, w.node)),
            witness_reachable: witness
                .map(|w| w.reachable.iter().map(|&x| state_of(verdict, x)).collect()),
            failing_states: witness.map(|w| w.failing.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub record: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub game: Option<String>,
    pub strategy: String,
    pub rng: &'static str,
    pub seed: u64,
    pub stream: u64,
    pub initial: State1,
    pub profiles: Vec<Vec<usize>>,
    pub steps: usize,
    pub absorbed: bool,
}

impl TraceRecord {
    pub fn new(game: Option<&str>, strategy: &str, space: &ProfileSpace, trace: &Trace) -> Self {
        let decode = |xs: &[usize]| xs.iter().map(|&x| space.profile(x).one_based()).collect();
        Self {
            record: "trace",
            game: game.map(str::to_owned),
            strategy: strategy.to_owned(),
            rng: trace.rng,
            seed: trace.seed,
            stream: trace.stream,
            initial: decode(&trace.initial),
            profiles: decode(&trace.profiles),
            steps: trace.steps(),
            absorbed: trace.absorbed,
        }
    }
}
