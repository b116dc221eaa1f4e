//! Deterministic protocols that coordinate a search over profiles through
//! repeated play.
//!
//! Both use the lexicographic successor on row-major profile indices as the
//! cyclic permutation that orders the search.

use crate::error::{Error, Result};
use crate::game::{ActionSet, Game, PlayerPayoffs, ProfileSpace};

use super::{ActionDistribution, PlayerStrategy, StrategyMapping, StrategyVector};

/// Three-step-recall protocol on every profile space.
///
/// For state `(a, b, c)`: if `b = c` the state is a query and the player keeps
/// `c_i` when best-replying to `c`, else plays its smallest best reply; if
/// `a = b != c` the candidate `a` was rejected and the player plays its part of
/// the successor of `a`; otherwise the player repeats `c_i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QueryProtocol3;

struct Protocol3Player {
    space: ProfileSpace,
    player: usize,
    best: Vec<ActionSet>,
}

impl PlayerStrategy for Protocol3Player {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        let (a, b, c) = (state[0], state[1], state[2]);
        let i = self.player;
        let action = if b == c {
            let best = self.best[self.space.opponent_index(c, i)];
            let current = self.space.action_at(c, i);
            if best.contains(current) {
                current
            } else {
                best.smallest().expect("best replies are nonempty")
            }
        } else if a == b {
            self.space.action_at(self.space.successor(a), i)
        } else {
            self.space.action_at(c, i)
        };
        ActionDistribution::point(action)
    }
}

impl StrategyMapping for QueryProtocol3 {
    fn name(&self) -> String {
        "det3".into()
    }

    fn recall(&self) -> usize {
        3
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        Ok(Box::new(Protocol3Player {
            space: payoffs.space().clone(),
            player: payoffs.player(),
            best: payoffs.best_reply_table(),
        }))
    }
}

pub fn det3(game: &Game) -> StrategyVector {
    StrategyVector::build(&QueryProtocol3, game).expect("det3 is defined on every game")
}

/// Two-step-recall protocol for spaces where every player has at least four actions.
///
/// State `(a, b)` is classified by the coordinate-wise residues
/// `a_j - b_j mod k_j` and `b_j - a_j mod k_j`:
/// move-on (`a != b`, all of the former in `{0,1}`) plays the successor of `a`;
/// query (all of the latter in `{0,1,2}`) keeps `b_i` when best-replying to `b`
/// and steps down to `b_i - 1 mod k_i` otherwise; every other state repeats `b`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QueryProtocol2;

/// Kind of a two-step state under [`QueryProtocol2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol2State {
    MoveOn,
    Query,
    Repeat,
}

impl QueryProtocol2 {
    pub fn is_move_on(space: &ProfileSpace, a: usize, b: usize) -> bool {
        a != b
            && (0..space.players()).all(|j| {
                let k = space.actions(j);
                (space.action_at(a, j) + k - space.action_at(b, j)) % k <= 1
            })
    }

    pub fn is_query(space: &ProfileSpace, a: usize, b: usize) -> bool {
        (0..space.players()).all(|j| {
            let k = space.actions(j);
            (space.action_at(b, j) + k - space.action_at(a, j)) % k <= 2
        })
    }

    /// Classification with move-on taking precedence; the two conditions never
    /// overlap when every player has at least four actions.
    pub fn classify(space: &ProfileSpace, a: usize, b: usize) -> Protocol2State {
        if Self::is_move_on(space, a, b) {
            Protocol2State::MoveOn
        } else if Self::is_query(space, a, b) {
            Protocol2State::Query
        } else {
            Protocol2State::Repeat
        }
    }
}

struct Protocol2Player {
    space: ProfileSpace,
    player: usize,
    best: Vec<ActionSet>,
}

impl PlayerStrategy for Protocol2Player {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        let (a, b) = (state[0], state[1]);
        let i = self.player;
        let action = match QueryProtocol2::classify(&self.space, a, b) {
            Protocol2State::MoveOn => self.space.action_at(self.space.successor(a), i),
            Protocol2State::Query => {
                let current = self.space.action_at(b, i);
                if self.best[self.space.opponent_index(b, i)].contains(current) {
                    current
                } else {
                    let k = self.space.actions(i);
                    (current + k - 1) % k
                }
            }
            Protocol2State::Repeat => self.space.action_at(b, i),
        };
        ActionDistribution::point(action)
    }
}

impl StrategyMapping for QueryProtocol2 {
    fn name(&self) -> String {
        "det2".into()
    }

    fn recall(&self) -> usize {
        2
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn supports(&self, space: &ProfileSpace) -> Result<()> {
        if let Some((i, k)) = space
            .action_counts()
            .iter()
            .enumerate()
            .find(|(_, &k)| k < 4)
        {
            return Err(Error::UnsupportedSize(format!(
                "det2 needs at least four actions for every player; player {} has {k}",
                i + 1
            )));
        }
        Ok(())
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        self.supports(payoffs.space())?;
        Ok(Box::new(Protocol2Player {
            space: payoffs.space().clone(),
            player: payoffs.player(),
            best: payoffs.best_reply_table(),
        }))
    }
}

pub fn det2(game: &Game) -> Result<StrategyVector> {
    StrategyVector::build(&QueryProtocol2, game)
}
