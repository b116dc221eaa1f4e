//! Finite normal-form games with exact integer payoffs.
//!
//! Profiles are stored 0-based and flattened row-major (the last player's
//! action varies fastest). All display and file formats use 1-based actions.

use std::fmt;

use crate::error::{invalid, Error, Result};

/// Player actions are limited to what fits in an [`ActionSet`] bitmask.
pub const MAX_ACTIONS: usize = 64;

/// The shape `(k_1, ..., k_n)` of a game: player count and per-player action counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProfileSpace {
    counts: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl ProfileSpace {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(invalid(format!(
                "a game needs at least two players, got {}",
                counts.len()
            )));
        }
        if let Some((i, &k)) = counts.iter().enumerate().find(|(_, &k)| k < 2) {
            return Err(invalid(format!(
                "player {} has {k} actions; every player needs at least two",
                i + 1
            )));
        }
        if let Some((i, &k)) = counts.iter().enumerate().find(|(_, &k)| k > MAX_ACTIONS) {
            return Err(invalid(format!(
                "player {} has {k} actions; at most {MAX_ACTIONS} are supported",
                i + 1
            )));
        }
        let mut strides = vec![1usize; counts.len()];
        let mut total = 1usize;
        for i in (0..counts.len()).rev() {
            strides[i] = total;
            total = total.checked_mul(counts[i]).ok_or_else(|| Error::Resource {
                what: "profile count",
                required: format!("product of {counts:?}"),
                budget: usize::MAX.to_string(),
            })?;
        }
        Ok(Self {
            counts,
            strides,
            total,
        })
    }

    pub fn players(&self) -> usize {
        self.counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn actions(&self, player: usize) -> usize {
        self.counts[player]
    }

    /// Total number of profiles `|A|`.
    pub fn size(&self) -> usize {
        self.total
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.players() {
            return Err(invalid(format!(
                "player index {player} out of range for {} players",
                self.players()
            )));
        }
        Ok(())
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.total {
            return Err(invalid(format!(
                "profile index {index} out of range for {} profiles",
                self.total
            )));
        }
        Ok(())
    }

    /// Row-major index of a profile.
    pub fn index_of(&self, profile: &Profile) -> Result<usize> {
        if profile.0.len() != self.players() {
            return Err(invalid(format!(
                "profile {profile} has {} actions, expected {}",
                profile.0.len(),
                self.players()
            )));
        }
        let mut index = 0;
        for (i, (&a, &k)) in profile.0.iter().zip(&self.counts).enumerate() {
            if a >= k {
                return Err(invalid(format!(
                    "profile {profile}: action {} of player {} exceeds {k}",
                    a + 1,
                    i + 1
                )));
            }
            index += a * self.strides[i];
        }
        Ok(index)
    }

    pub fn profile(&self, index: usize) -> Profile {
        Profile(
            (0..self.players())
                .map(|i| self.action_at(index, i))
                .collect(),
        )
    }

    /// Action of `player` in the profile with the given index.
    #[inline]
    pub fn action_at(&self, index: usize, player: usize) -> usize {
        (index / self.strides[player]) % self.counts[player]
    }

    /// Index of the profile obtained by replacing `player`'s action.
    #[inline]
    pub fn with_action(&self, index: usize, player: usize, action: usize) -> usize {
        let current = self.action_at(index, player);
        index - current * self.strides[player] + action * self.strides[player]
    }

    /// Index of the opponents' sub-profile, flattened row-major over the
    /// remaining players.
    #[inline]
    pub fn opponent_index(&self, index: usize, player: usize) -> usize {
        let stride = self.strides[player];
        (index / (stride * self.counts[player])) * stride + index % stride
    }

    /// Number of opponent sub-profiles for `player`.
    pub fn opponent_count(&self, player: usize) -> usize {
        self.total / self.counts[player]
    }

    /// Some profile index whose opponents' sub-profile is `opponent` (with `player` at 0).
    pub fn from_opponent_index(&self, opponent: usize, player: usize) -> usize {
        let stride = self.strides[player];
        (opponent / stride) * stride * self.counts[player] + opponent % stride
    }

    /// Lexicographic successor on row-major indices, wrapping at the last profile.
    #[inline]
    pub fn successor(&self, index: usize) -> usize {
        (index + 1) % self.total
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.total
    }
}

impl fmt::Display for ProfileSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// An action profile, one 0-based action per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    /// Build from the 1-based notation used in reports.
    pub fn from_one_based(actions: &[usize]) -> Result<Self> {
        if actions.contains(&0) {
            return Err(invalid(format!("actions are 1-based, got {actions:?}")));
        }
        Ok(Self(actions.iter().map(|a| a - 1).collect()))
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|a| a + 1).collect()
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A set of actions for one player, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ActionSet(u64);

impl ActionSet {
    pub const EMPTY: ActionSet = ActionSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(action: usize) -> Self {
        Self(1 << action)
    }

    pub fn full(actions: usize) -> Self {
        if actions >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << actions) - 1)
        }
    }

    pub fn insert(&mut self, action: usize) {
        self.0 |= 1 << action;
    }

    #[inline]
    pub fn contains(self, action: usize) -> bool {
        action < 64 && self.0 >> action & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest action in the set.
    #[inline]
    pub fn smallest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&a| self.contains(a))
    }
}

impl FromIterator<usize> for ActionSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = ActionSet::EMPTY;
        for a in iter {
            set.insert(a);
        }
        set
    }
}

/// Best replies of one player given a payoff tensor, against the opponents of
/// the profile at `index`.
fn best_reply_set(space: &ProfileSpace, player: usize, payoffs: &[i64], index: usize) -> ActionSet {
    let k = space.actions(player);
    let base = space.with_action(index, player, 0);
    let stride = space.strides[player];
    let mut best = i64::MIN;
    let mut set = ActionSet::EMPTY;
    for a in 0..k {
        let u = payoffs[base + a * stride];
        if u > best {
            best = u;
            set = ActionSet::singleton(a);
        } else if u == best {
            set.insert(a);
        }
    }
    set
}

/// One player's payoff tensor together with its profile space.
///
/// This is the only game data a strategy builder sees, which makes every
/// strategy mapping built through it uncoupled.
#[derive(Debug, Clone, Copy)]
pub struct PlayerPayoffs<'a> {
    space: &'a ProfileSpace,
    player: usize,
    payoffs: &'a [i64],
}

impl<'a> PlayerPayoffs<'a> {
    pub fn new(space: &'a ProfileSpace, player: usize, payoffs: &'a [i64]) -> Result<Self> {
        space.check_player(player)?;
        if payoffs.len() != space.size() {
            return Err(invalid(format!(
                "payoff tensor has {} entries, expected {}",
                payoffs.len(),
                space.size()
            )));
        }
        Ok(Self {
            space,
            player,
            payoffs,
        })
    }

    pub fn space(&self) -> &'a ProfileSpace {
        self.space
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn values(&self) -> &'a [i64] {
        self.payoffs
    }

    pub fn payoff(&self, index: usize) -> i64 {
        self.payoffs[index]
    }

    pub fn best_replies(&self, index: usize) -> ActionSet {
        best_reply_set(self.space, self.player, self.payoffs, index)
    }

    /// Best-reply sets indexed by opponent sub-profile.
    pub fn best_reply_table(&self) -> Vec<ActionSet> {
        (0..self.space.opponent_count(self.player))
            .map(|o| self.best_replies(self.space.from_opponent_index(o, self.player)))
            .collect()
    }
}

/// A finite game: a profile space and one exact integer payoff tensor per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game {
    space: ProfileSpace,
    payoffs: Vec<Vec<i64>>,
    name: Option<String>,
}

impl Game {
    pub fn new(space: ProfileSpace, payoffs: Vec<Vec<i64>>) -> Result<Self> {
        if payoffs.len() != space.players() {
            return Err(invalid(format!(
                "{} payoff tensors for {} players",
                payoffs.len(),
                space.players()
            )));
        }
        for (i, p) in payoffs.iter().enumerate() {
            if p.len() != space.size() {
                return Err(invalid(format!(
                    "payoff tensor of player {} has {} entries, expected {}",
                    i + 1,
                    p.len(),
                    space.size()
                )));
            }
        }
        Ok(Self {
            space,
            payoffs,
            name: None,
        })
    }

    /// Build a game from a payoff function `u(player, profile)` over 0-based profiles.
    pub fn from_fn(space: ProfileSpace, mut u: impl FnMut(usize, &Profile) -> i64) -> Self {
        let profiles: Vec<Profile> = space.indices().map(|x| space.profile(x)).collect();
        let payoffs = (0..space.players())
            .map(|i| profiles.iter().map(|p| u(i, p)).collect())
            .collect();
        Self {
            space,
            payoffs,
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn payoffs(&self) -> &[Vec<i64>] {
        &self.payoffs
    }

    pub fn payoff(&self, player: usize, index: usize) -> i64 {
        self.payoffs[player][index]
    }

    pub fn player_payoffs(&self, player: usize) -> PlayerPayoffs<'_> {
        PlayerPayoffs {
            space: &self.space,
            player,
            payoffs: &self.payoffs[player],
        }
    }

    fn check(&self, profile: &Profile, player: usize) -> Result<usize> {
        self.space.check_player(player)?;
        self.space.index_of(profile)
    }

    pub fn best_replies(&self, profile: &Profile, player: usize) -> Result<ActionSet> {
        let index = self.check(profile, player)?;
        Ok(self.best_replies_at(index, player))
    }

    #[inline]
    pub fn best_replies_at(&self, index: usize, player: usize) -> ActionSet {
        best_reply_set(&self.space, player, &self.payoffs[player], index)
    }

    pub fn is_best_replying(&self, profile: &Profile, player: usize) -> Result<bool> {
        let index = self.check(profile, player)?;
        Ok(self.is_best_replying_at(index, player))
    }

    #[inline]
    pub fn is_best_replying_at(&self, index: usize, player: usize) -> bool {
        self.best_replies_at(index, player)
            .contains(self.space.action_at(index, player))
    }

    pub fn is_pne_at(&self, index: usize) -> bool {
        (0..self.space.players()).all(|i| self.is_best_replying_at(index, i))
    }

    /// Pure Nash equilibria in lexicographic order.
    pub fn find_pne(&self) -> Vec<Profile> {
        self.pne_indices()
            .into_iter()
            .map(|x| self.space.profile(x))
            .collect()
    }

    pub fn pne_indices(&self) -> Vec<usize> {
        self.space.indices().filter(|&x| self.is_pne_at(x)).collect()
    }

    pub fn is_generic(&self) -> bool {
        self.best_reply_structure().is_generic()
    }

    /// The action that is the unique best reply at every profile, if any.
    pub fn strictly_dominant_action(&self, player: usize) -> Result<Option<usize>> {
        self.space.check_player(player)?;
        Ok(strictly_dominant(&self.player_payoffs(player).best_reply_table()))
    }

    pub fn best_reply_structure(&self) -> BestReplyStructure {
        let sets = (0..self.space.players())
            .map(|i| self.player_payoffs(i).best_reply_table())
            .collect();
        BestReplyStructure::from_tables_unchecked(self.space.clone(), sets)
    }
}

fn strictly_dominant(table: &[ActionSet]) -> Option<usize> {
    let first = *table.first()?;
    if first.len() == 1 && table.iter().all(|&s| s == first) {
        first.smallest()
    } else {
        None
    }
}

/// The best-reply correspondence of every player, indexed by opponent sub-profile.
///
/// Indexing by opponents makes invariance under a player's own action hold by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BestReplyStructure {
    space: ProfileSpace,
    sets: Vec<Vec<ActionSet>>,
    generic: bool,
}

impl BestReplyStructure {
    pub fn new(space: ProfileSpace, sets: Vec<Vec<ActionSet>>) -> Result<Self> {
        if sets.len() != space.players() {
            return Err(invalid(format!(
                "{} best-reply tables for {} players",
                sets.len(),
                space.players()
            )));
        }
        for (i, table) in sets.iter().enumerate() {
            if table.len() != space.opponent_count(i) {
                return Err(invalid(format!(
                    "player {} best-reply table has {} entries, expected {}",
                    i + 1,
                    table.len(),
                    space.opponent_count(i)
                )));
            }
            let full = ActionSet::full(space.actions(i));
            if let Some(bad) = table.iter().find(|s| s.is_empty() || s.bits() & !full.bits() != 0) {
                return Err(invalid(format!(
                    "player {} has an empty or out-of-range best-reply set {:?}",
                    i + 1,
                    bad.iter().map(|a| a + 1).collect::<Vec<_>>()
                )));
            }
        }
        Ok(Self::from_tables_unchecked(space, sets))
    }

    pub(crate) fn from_tables_unchecked(space: ProfileSpace, sets: Vec<Vec<ActionSet>>) -> Self {
        let generic = sets.iter().flatten().all(|s| s.len() == 1);
        Self {
            space,
            sets,
            generic,
        }
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn is_generic(&self) -> bool {
        self.generic
    }

    #[inline]
    pub fn get(&self, player: usize, index: usize) -> ActionSet {
        self.sets[player][self.space.opponent_index(index, player)]
    }

    pub fn table(&self, player: usize) -> &[ActionSet] {
        &self.sets[player]
    }

    pub fn tables(&self) -> &[Vec<ActionSet>] {
        &self.sets
    }

    pub fn strictly_dominant_action(&self, player: usize) -> Option<usize> {
        strictly_dominant(&self.sets[player])
    }

    pub fn is_pne_at(&self, index: usize) -> bool {
        (0..self.space.players()).all(|i| self.get(i, index).contains(self.space.action_at(index, i)))
    }
}
