//! Strategy mappings for a smaller space built from a historyless mapping on a
//! padded space.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{Game, PlayerPayoffs, ProfileSpace};

use super::{ActionDistribution, PlayerStrategy, StrategyMapping, StrategyVector};

fn require_historyless(base: &dyn StrategyMapping) -> Result<()> {
    if base.recall() != 1 {
        return Err(Error::Unsupported(format!(
            "padding reductions need a historyless base mapping; {} has recall {}",
            base.name(),
            base.recall()
        )));
    }
    Ok(())
}

fn padded_action_space(space: &ProfileSpace, player: usize) -> Result<ProfileSpace> {
    space.check_player(player)?;
    let mut counts = space.action_counts().to_vec();
    counts[player] += 1;
    ProfileSpace::new(counts)
}

/// Maps each profile of the padded space to the profile of the original space
/// where the duplicate action `k_i + 1` reads as `k_i`.
fn collapse_table(space: &ProfileSpace, padded: &ProfileSpace, player: usize) -> Vec<usize> {
    let top = space.actions(player) - 1;
    padded
        .indices()
        .map(|y| {
            let mut p = padded.profile(y);
            p.0[player] = p.0[player].min(top);
            space.index_of(&p).expect("collapsed profile is in range")
        })
        .collect()
}

fn embed_table(space: &ProfileSpace, padded: &ProfileSpace) -> Vec<usize> {
    space
        .indices()
        .map(|x| padded.index_of(&space.profile(x)).expect("embedding is in range"))
        .collect()
}

/// The game on the padded space where player `player`'s action `k_i + 1`
/// duplicates `k_i` for everybody.
pub fn pad_action_game(game: &Game, player: usize) -> Result<Game> {
    let space = game.space();
    let padded = padded_action_space(space, player)?;
    let collapse = collapse_table(space, &padded, player);
    let payoffs = game
        .payoffs()
        .iter()
        .map(|u| collapse.iter().map(|&x| u[x]).collect())
        .collect();
    Game::new(padded, payoffs)
}

/// Reduction that plays a historyless mapping for the space with one extra
/// action for `player`.
///
/// Whenever `player` is seen playing its last action, every player
/// independently reads it as either that action or the duplicate with
/// probability one half each, and plays the base mapping's answer on the
/// padded game. The padded player's answers are clamped back into its own
/// action set.
#[derive(Clone)]
pub struct PadAction {
    base: Arc<dyn StrategyMapping>,
    player: usize,
}

impl PadAction {
    pub fn new(base: Arc<dyn StrategyMapping>, player: usize) -> Result<Self> {
        require_historyless(base.as_ref())?;
        Ok(Self { base, player })
    }
}

struct PadActionPlayer {
    space: ProfileSpace,
    padded: ProfileSpace,
    padded_player: usize,
    player: usize,
    embed: Vec<usize>,
    base: Box<dyn PlayerStrategy>,
}

impl PlayerStrategy for PadActionPlayer {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        let x = state[0];
        let i = self.padded_player;
        let top = self.space.actions(i) - 1;
        let y = self.embed[x];
        let d = if self.space.action_at(x, i) == top {
            let duplicate = self.padded.with_action(y, i, top + 1);
            self.base.next(&[duplicate]).mix_half(&self.base.next(&[y]))
        } else {
            self.base.next(&[y])
        };
        if self.player == i {
            d.map_actions(|a| a.min(top))
        } else {
            d
        }
    }
}

impl StrategyMapping for PadAction {
    fn name(&self) -> String {
        format!("pad-action[{}]({})", self.player + 1, self.base.name())
    }

    fn recall(&self) -> usize {
        1
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn supports(&self, space: &ProfileSpace) -> Result<()> {
        let padded = padded_action_space(space, self.player)?;
        self.base.supports(&padded)
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        let space = payoffs.space();
        let padded = padded_action_space(space, self.player)?;
        let collapse = collapse_table(space, &padded, self.player);
        let padded_payoffs: Vec<i64> = collapse.iter().map(|&x| payoffs.payoff(x)).collect();
        let base = self
            .base
            .player_strategy(PlayerPayoffs::new(&padded, payoffs.player(), &padded_payoffs)?)?;
        Ok(Box::new(PadActionPlayer {
            embed: embed_table(space, &padded),
            space: space.clone(),
            padded,
            padded_player: self.player,
            player: payoffs.player(),
            base,
        }))
    }
}

pub fn pad_action_reduction(
    base: Arc<dyn StrategyMapping>,
    player: usize,
    game: &Game,
) -> Result<StrategyVector> {
    StrategyVector::build(&PadAction::new(base, player)?, game)
}

fn padded_player_space(space: &ProfileSpace, extra_actions: usize) -> Result<ProfileSpace> {
    let mut counts = space.action_counts().to_vec();
    counts.push(extra_actions);
    ProfileSpace::new(counts)
}

/// The game with an extra player who only cares about playing its first
/// action and about whom nobody else cares.
pub fn pad_player_game(game: &Game, extra_actions: usize) -> Result<Game> {
    let padded = padded_player_space(game.space(), extra_actions)?;
    let mut payoffs: Vec<Vec<i64>> = game
        .payoffs()
        .iter()
        .map(|u| padded.indices().map(|y| u[y / extra_actions]).collect())
        .collect();
    payoffs.push(
        padded
            .indices()
            .map(|y| (y % extra_actions == 0) as i64)
            .collect(),
    );
    Game::new(padded, payoffs)
}

/// Reduction that plays a historyless mapping for the space with one extra
/// apathetic player pinned to its first action.
#[derive(Clone)]
pub struct PadPlayer {
    base: Arc<dyn StrategyMapping>,
    extra_actions: usize,
}

impl PadPlayer {
    pub fn new(base: Arc<dyn StrategyMapping>, extra_actions: usize) -> Result<Self> {
        require_historyless(base.as_ref())?;
        if extra_actions < 2 {
            return Err(Error::InvalidInput(format!(
                "the extra player needs at least two actions, got {extra_actions}"
            )));
        }
        Ok(Self {
            base,
            extra_actions,
        })
    }
}

struct PadPlayerPlayer {
    extra_actions: usize,
    base: Box<dyn PlayerStrategy>,
}

impl PlayerStrategy for PadPlayerPlayer {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        // Last player varies fastest, so (x, 1) is x * k_{n+1}.
        self.base.next(&[state[0] * self.extra_actions])
    }
}

impl StrategyMapping for PadPlayer {
    fn name(&self) -> String {
        format!("pad-player[{}]({})", self.extra_actions, self.base.name())
    }

    fn recall(&self) -> usize {
        1
    }

    fn is_deterministic(&self) -> bool {
        self.base.is_deterministic()
    }

    fn supports(&self, space: &ProfileSpace) -> Result<()> {
        self.base
            .supports(&padded_player_space(space, self.extra_actions)?)
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        let padded = padded_player_space(payoffs.space(), self.extra_actions)?;
        let padded_payoffs: Vec<i64> = padded
            .indices()
            .map(|y| payoffs.payoff(y / self.extra_actions))
            .collect();
        let base = self
            .base
            .player_strategy(PlayerPayoffs::new(&padded, payoffs.player(), &padded_payoffs)?)?;
        Ok(Box::new(PadPlayerPlayer {
            extra_actions: self.extra_actions,
            base,
        }))
    }
}

pub fn pad_player_reduction(
    base: Arc<dyn StrategyMapping>,
    extra_actions: usize,
    game: &Game,
) -> Result<StrategyVector> {
    StrategyVector::build(&PadPlayer::new(base, extra_actions)?, game)
}
