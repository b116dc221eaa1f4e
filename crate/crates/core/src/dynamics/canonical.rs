use crate::error::Result;
use crate::game::{ActionSet, Game, PlayerPayoffs, ProfileSpace};

use super::{ActionDistribution, PlayerStrategy, StrategyMapping, StrategyVector};

/// The canonical historyless mapping: stay while best-replying, otherwise
/// pick uniformly among all own actions.
#[derive(Debug, Clone, Copy, Default)]
pub struct CanonicalH;

struct CanonicalPlayer {
    space: ProfileSpace,
    player: usize,
    best: Vec<ActionSet>,
}

impl PlayerStrategy for CanonicalPlayer {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        let x = state[0];
        let current = self.space.action_at(x, self.player);
        if self.best[self.space.opponent_index(x, self.player)].contains(current) {
            ActionDistribution::point(current)
        } else {
            ActionDistribution::uniform(self.space.actions(self.player))
        }
    }
}

impl StrategyMapping for CanonicalH {
    fn name(&self) -> String {
        "h".into()
    }

    fn recall(&self) -> usize {
        1
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        Ok(Box::new(CanonicalPlayer {
            space: payoffs.space().clone(),
            player: payoffs.player(),
            best: payoffs.best_reply_table(),
        }))
    }
}

pub fn canonical_h(game: &Game) -> StrategyVector {
    StrategyVector::build(&CanonicalH, game).expect("h is defined on every game")
}

/// Deterministic historyless mapping: stay while best-replying, otherwise play
/// the smallest best reply.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinBestReply;

struct MinBestReplyPlayer {
    space: ProfileSpace,
    player: usize,
    best: Vec<ActionSet>,
}

impl PlayerStrategy for MinBestReplyPlayer {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        let x = state[0];
        let current = self.space.action_at(x, self.player);
        let best = self.best[self.space.opponent_index(x, self.player)];
        if best.contains(current) {
            ActionDistribution::point(current)
        } else {
            ActionDistribution::point(best.smallest().expect("best replies are nonempty"))
        }
    }
}

impl StrategyMapping for MinBestReply {
    fn name(&self) -> String {
        "min-br".into()
    }

    fn recall(&self) -> usize {
        1
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        Ok(Box::new(MinBestReplyPlayer {
            space: payoffs.space().clone(),
            player: payoffs.player(),
            best: payoffs.best_reply_table(),
        }))
    }
}

pub fn min_best_reply(game: &Game) -> StrategyVector {
    StrategyVector::build(&MinBestReply, game).expect("min-br is defined on every game")
}
