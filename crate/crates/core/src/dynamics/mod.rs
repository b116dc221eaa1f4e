//! Strategy mappings as executable objects.
//!
//! A [`StrategyMapping`] turns one player's payoff tensor into that player's
//! stationary strategy; [`StrategyVector::build`] applies it to every player of
//! a game. Builders never see more than a single [`PlayerPayoffs`], so every
//! mapping defined here is uncoupled by construction.

mod canonical;
mod protocols;
mod recall;
mod reductions;

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::game::{Game, PlayerPayoffs, Profile, ProfileSpace};

pub use canonical::{canonical_h, min_best_reply, CanonicalH, MinBestReply};
pub use protocols::{det2, det3, Protocol2State, QueryProtocol2, QueryProtocol3};
pub use recall::ExtendedRecall;
pub use reductions::{
    pad_action_game, pad_action_reduction, pad_player_game, pad_player_reduction, PadAction,
    PadPlayer,
};

/// Exact probabilities.
pub type Probability = Ratio<u64>;

/// A finite distribution over one player's actions with exact weights.
///
/// The support is kept sorted by action and holds only positive weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionDistribution {
    support: Vec<(usize, Probability)>,
}

impl ActionDistribution {
    pub fn point(action: usize) -> Self {
        Self {
            support: vec![(action, Probability::one())],
        }
    }

    pub fn uniform(actions: usize) -> Self {
        let w = Probability::new(1, actions as u64);
        Self {
            support: (0..actions).map(|a| (a, w)).collect(),
        }
    }

    /// Collects weights, merging repeated actions and dropping zeros. The
    /// weights must sum to exactly one.
    pub fn from_weights(weights: impl IntoIterator<Item = (usize, Probability)>) -> Result<Self> {
        let mut support: Vec<(usize, Probability)> = Vec::new();
        for (a, w) in weights {
            if w.is_zero() {
                continue;
            }
            match support.binary_search_by_key(&a, |&(b, _)| b) {
                Ok(pos) => support[pos].1 += w,
                Err(pos) => support.insert(pos, (a, w)),
            }
        }
        let total: Probability = support.iter().map(|&(_, w)| w).sum();
        if !total.is_one() {
            return Err(invalid(format!("action weights sum to {total}, not 1")));
        }
        Ok(Self { support })
    }

    pub fn support(&self) -> &[(usize, Probability)] {
        &self.support
    }

    pub fn probability(&self, action: usize) -> Probability {
        self.support
            .binary_search_by_key(&action, |&(b, _)| b)
            .map(|pos| self.support[pos].1)
            .unwrap_or_else(|_| Probability::zero())
    }

    /// The action carrying all the mass, if this is a point mass.
    pub fn point_mass(&self) -> Option<usize> {
        match self.support.as_slice() {
            [(a, _)] => Some(*a),
            _ => None,
        }
    }

    /// Equal-weight mixture of two distributions.
    pub fn mix_half(&self, other: &Self) -> Self {
        let half = Probability::new(1, 2);
        let weights = self
            .support
            .iter()
            .chain(&other.support)
            .map(|&(a, w)| (a, w * half));
        Self::from_weights(weights).expect("mixture of distributions is a distribution")
    }

    /// Push the distribution forward through an action map.
    pub fn map_actions(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_weights(self.support.iter().map(|&(a, w)| (f(a), w)))
            .expect("image of a distribution is a distribution")
    }
}

/// The last `r` profiles, oldest first, as row-major profile indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecallState(Vec<usize>);

impl RecallState {
    pub fn new(space: &ProfileSpace, profiles: &[Profile]) -> Result<Self> {
        if profiles.is_empty() {
            return Err(invalid("a recall state needs at least one profile"));
        }
        profiles
            .iter()
            .map(|p| space.index_of(p))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn from_indices(space: &ProfileSpace, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(invalid("a recall state needs at least one profile"));
        }
        for &x in &indices {
            space.check_index(x)?;
        }
        Ok(Self(indices))
    }

    /// The state consisting of `profile` repeated `recall` times.
    pub fn repeated(space: &ProfileSpace, profile: &Profile, recall: usize) -> Result<Self> {
        Self::from_indices(space, vec![space.index_of(profile)?; recall])
    }

    pub fn recall(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn latest(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    pub fn profiles(&self, space: &ProfileSpace) -> Vec<Profile> {
        self.0.iter().map(|&x| space.profile(x)).collect()
    }

    /// The state after `next` is played.
    pub fn shifted(&self, next: usize) -> Self {
        let mut v = self.0[1..].to_vec();
        v.push(next);
        Self(v)
    }

    pub fn display<'a>(&'a self, space: &'a ProfileSpace) -> impl fmt::Display + 'a {
        DisplayState { state: self, space }
    }
}

struct DisplayState<'a> {
    state: &'a RecallState,
    space: &'a ProfileSpace,
}

impl fmt::Display for DisplayState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .state
            .0
            .iter()
            .map(|&x| self.space.profile(x).to_string())
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "[{}]", parts.join(" "))
        }
    }
}

/// One player's stationary strategy: recall state to next-action distribution.
///
/// The state slice holds `r` profile indices, oldest first. Implementations
/// must be pure functions of the state.
pub trait PlayerStrategy: Send + Sync {
    fn next(&self, state: &[usize]) -> ActionDistribution;
}

/// A rule assigning each player a strategy from that player's payoffs alone.
pub trait StrategyMapping: Send + Sync {
    fn name(&self) -> String;

    fn recall(&self) -> usize;

    fn is_deterministic(&self) -> bool;

    /// Rejects profile spaces the mapping is not defined on.
    fn supports(&self, _space: &ProfileSpace) -> Result<()> {
        Ok(())
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>>;
}

/// The strategies of all players of one game.
pub struct StrategyVector {
    name: String,
    space: ProfileSpace,
    recall: usize,
    deterministic: bool,
    players: Vec<Box<dyn PlayerStrategy>>,
}

impl fmt::Debug for StrategyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrategyVector")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("recall", &self.recall)
            .field("deterministic", &self.deterministic)
            .finish_non_exhaustive()
    }
}

impl StrategyVector {
    pub fn build(mapping: &dyn StrategyMapping, game: &Game) -> Result<Self> {
        let space = game.space();
        mapping.supports(space)?;
        let players = (0..space.players())
            .map(|i| mapping.player_strategy(game.player_payoffs(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: mapping.name(),
            space: space.clone(),
            recall: mapping.recall(),
            deterministic: mapping.is_deterministic(),
            players,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn recall(&self) -> usize {
        self.recall
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    fn check_state(&self, state: &RecallState) -> Result<()> {
        if state.recall() != self.recall {
            return Err(invalid(format!(
                "state has recall {}, strategy {} has recall {}",
                state.recall(),
                self.name,
                self.recall
            )));
        }
        for &x in state.indices() {
            self.space.check_index(x)?;
        }
        Ok(())
    }

    pub fn player_distribution(&self, player: usize, state: &RecallState) -> Result<ActionDistribution> {
        self.space.check_player(player)?;
        self.check_state(state)?;
        Ok(self.distribution_at(player, state.indices()))
    }

    /// Unchecked per-player evaluation on raw state indices.
    #[inline]
    pub fn distribution_at(&self, player: usize, state: &[usize]) -> ActionDistribution {
        let d = self.players[player].next(state);
        debug_assert!(!self.deterministic || d.point_mass().is_some());
        d
    }

    /// Distribution of the next profile: the product of the players' distributions.
    pub fn transition_distribution(&self, state: &RecallState) -> Result<Vec<(Profile, Probability)>> {
        self.check_state(state)?;
        Ok(self
            .successors(state.indices())
            .into_iter()
            .map(|(x, p)| (self.space.profile(x), p))
            .collect())
    }

    /// Next-profile indices with positive probability, in increasing index order.
    pub fn successors(&self, state: &[usize]) -> Vec<(usize, Probability)> {
        let mut acc: Vec<(usize, Probability)> = vec![(0, Probability::one())];
        for player in 0..self.space.players() {
            let d = self.distribution_at(player, state);
            if let Some(a) = d.point_mass() {
                for entry in &mut acc {
                    entry.0 = self.space.with_action(entry.0, player, a);
                }
                continue;
            }
            let mut next = Vec::with_capacity(acc.len() * d.support().len());
            for &(x, p) in &acc {
                for &(a, w) in d.support() {
                    next.push((self.space.with_action(x, player, a), p * w));
                }
            }
            acc = next;
        }
        acc.sort_unstable_by_key(|&(x, _)| x);
        acc
    }
}

/// Which of the two best-reply conditions a historyless strategy breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observation4Condition {
    /// Best-replying, but moves with positive probability.
    MovesWhileBestReplying,
    /// Not best-replying, but never moves.
    StaysWhileNotBestReplying,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation4Violation {
    pub profile: Profile,
    pub player: usize,
    pub condition: Observation4Condition,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Observation4Report {
    pub violations: Vec<Observation4Violation>,
}

impl Observation4Report {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the two necessary conditions every successful historyless mapping
/// satisfies: no player moves while best-replying, and every player moves with
/// positive probability while not best-replying.
pub fn check_observation4(strategy: &StrategyVector, game: &Game) -> Result<Observation4Report> {
    if strategy.recall() != 1 {
        return Err(Error::Unsupported(format!(
            "best-reply conformance is defined for historyless strategies; {} has recall {}",
            strategy.name(),
            strategy.recall()
        )));
    }
    if strategy.space() != game.space() {
        return Err(invalid("strategy and game have different profile spaces"));
    }
    let space = game.space();
    let mut report = Observation4Report::default();
    for x in space.indices() {
        for player in 0..space.players() {
            let current = space.action_at(x, player);
            let d = strategy.distribution_at(player, &[x]);
            let stay = d.probability(current);
            let condition = if game.is_best_replying_at(x, player) {
                (!stay.is_one()).then_some(Observation4Condition::MovesWhileBestReplying)
            } else {
                stay.is_one()
                    .then_some(Observation4Condition::StaysWhileNotBestReplying)
            };
            if let Some(condition) = condition {
                report.violations.push(Observation4Violation {
                    profile: space.profile(x),
                    player,
                    condition,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_construction() {
        let d = ActionDistribution::from_weights(vec![
            (2, Probability::new(1, 4)),
            (0, Probability::new(1, 4)),
            (2, Probability::new(1, 2)),
            (1, Probability::zero()),
        ])
        .unwrap();
        assert_eq!(d.support(), &[(0, Probability::new(1, 4)), (2, Probability::new(3, 4))]);
        assert_eq!(d.probability(1), Probability::zero());
        assert!(ActionDistribution::from_weights(vec![(0, Probability::new(1, 3))]).is_err());
        assert_eq!(ActionDistribution::point(3).point_mass(), Some(3));
        assert_eq!(ActionDistribution::uniform(3).point_mass(), None);
    }

    #[test]
    fn mixtures_and_clamping() {
        let a = ActionDistribution::point(0);
        let b = ActionDistribution::uniform(2);
        let m = a.mix_half(&b);
        assert_eq!(m.probability(0), Probability::new(3, 4));
        assert_eq!(m.probability(1), Probability::new(1, 4));
        let clamped = ActionDistribution::uniform(3).map_actions(|x| x.min(1));
        assert_eq!(clamped.probability(1), Probability::new(2, 3));
    }

    #[test]
    fn recall_state_shift() {
        let space = ProfileSpace::new(vec![2, 2]).unwrap();
        let s = RecallState::from_indices(&space, vec![0, 1, 2]).unwrap();
        assert_eq!(s.shifted(3).indices(), &[1, 2, 3]);
        assert!(RecallState::from_indices(&space, vec![4]).is_err());
        assert!(RecallState::from_indices(&space, vec![]).is_err());
        assert_eq!(s.display(&space).to_string(), "[(1,1) (1,2) (2,1)]");
    }
}
