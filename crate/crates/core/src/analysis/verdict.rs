use serde::Serialize;

use crate::dynamics::{canonical_h, RecallState, StrategyVector};
use crate::error::{invalid, Result};
use crate::game::{Game, Profile, ProfileSpace};

use super::graph::{build_graph, collect_marked, node_count, TransitionGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    SelfStabilizes,
    /// The game has no PNE, so success holds vacuously.
    NoPne,
    Fails,
}

impl Outcome {
    /// Success in the sense of self-stabilizing or vacuously succeeding.
    pub fn succeeds(self) -> bool {
        self != Outcome::Fails
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::SelfStabilizes => "self-stabilizes",
            Outcome::NoPne => "no-pne",
            Outcome::Fails => "fails",
        }
    }
}

/// Certificate that a strategy fails: a start node whose whole forward closure
/// avoids every absorbing PNE repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub node: usize,
    pub state: RecallState,
    /// Forward closure of `node`.
    pub reachable: Vec<usize>,
    /// Every node from which no absorbing PNE repeat is reachable.
    pub failing: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub space: ProfileSpace,
    pub recall: usize,
    pub pne: Vec<Profile>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn decode(&self, node: usize) -> RecallState {
        let size = self.space.size();
        let mut v = vec![0; self.recall];
        let mut rest = node;
        for slot in v.iter_mut().rev() {
            *slot = rest % size;
            rest /= size;
        }
        RecallState::from_indices(&self.space, v).expect("node decodes into the space")
    }

    /// Whether `state` is among the nodes that cannot reach an absorbing PNE.
    pub fn fails_from(&self, state: &RecallState) -> bool {
        let size = self.space.size();
        let node = state.indices().iter().fold(0, |acc, &x| acc * size + x);
        self.witness
            .as_ref()
            .is_some_and(|w| w.failing.binary_search(&node).is_ok())
    }
}

/// Decides, on the support graph, whether an absorbing PNE repeat is reachable
/// from every recall state.
pub fn decide_on_graph(graph: &TransitionGraph, game: &Game) -> Verdict {
    let pne = game.find_pne();
    let base = |outcome, witness| Verdict {
        outcome,
        space: graph.space().clone(),
        recall: graph.recall(),
        pne: pne.clone(),
        witness,
    };
    if pne.is_empty() {
        return base(Outcome::NoPne, None);
    }
    let targets = graph.absorbing_pne_states();
    let good = graph.can_reach(&targets);
    let failing = collect_marked(&good.iter().map(|g| !g).collect::<Vec<_>>());
    match failing.first() {
        None => base(Outcome::SelfStabilizes, None),
        Some(&node) => {
            let reachable = graph.reachable_set(node).expect("node in range");
            base(
                Outcome::Fails,
                Some(Witness {
                    node,
                    state: graph.state(node),
                    reachable,
                    failing,
                }),
            )
        }
    }
}

pub fn decide_success(strategy: &StrategyVector, game: &Game, budget: usize) -> Result<Verdict> {
    node_count(game.space(), strategy.recall(), budget)?;
    if game.find_pne().is_empty() {
        return Ok(Verdict {
            outcome: Outcome::NoPne,
            space: game.space().clone(),
            recall: strategy.recall(),
            pne: Vec::new(),
            witness: None,
        });
    }
    let graph = build_graph(strategy, game, budget)?;
    Ok(decide_on_graph(&graph, game))
}

/// For a two-player generic game in which neither player has a strictly
/// dominant action: is every profile reachable under `h` from every non-PNE
/// profile?
pub fn check_lemma12(game: &Game) -> Result<bool> {
    let space = game.space();
    if space.players() != 2 {
        return Err(invalid(format!(
            "precondition failed: two players required, game has {}",
            space.players()
        )));
    }
    if !game.is_generic() {
        return Err(invalid("precondition failed: game is not generic"));
    }
    for player in 0..2 {
        if let Some(a) = game.strictly_dominant_action(player)? {
            return Err(invalid(format!(
                "precondition failed: player {} has strictly dominant action {}",
                player + 1,
                a + 1
            )));
        }
    }
    let h = canonical_h(game);
    let graph = build_graph(&h, game, space.size())?;
    for x in space.indices() {
        if game.is_pne_at(x) {
            continue;
        }
        if graph.reachable_set(x)?.len() != space.size() {
            return Ok(false);
        }
    }
    Ok(true)
}
