//! Sources of games: best-reply structures, enumerated exhaustively or
//! sampled, and random integer-payoff games.
//!
//! A structure is a choice, for every player and every opponent sub-profile,
//! of a nonempty best-reply set (class `all`) or a single best reply (class
//! `generic`). Exhaustive enumeration indexes structures in mixed radix with
//! the last (player, opponent sub-profile) component varying fastest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionSet, BestReplyStructure, Game, ProfileSpace};

pub const DEFAULT_STRUCTURE_CAP: u128 = 10_000_000;
pub const DEFAULT_REJECTION_CAP: usize = 10_000;
/// Payoffs of [`random_game`] are drawn uniformly from `0..PAYOFF_RANGE`.
pub const PAYOFF_RANGE: i64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameClass {
    All,
    Generic,
}

impl std::str::FromStr for GameClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(GameClass::All),
            "generic" => Ok(GameClass::Generic),
            other => Err(Error::InvalidInput(format!(
                "unknown class {other:?}; expected all or generic"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub space: ProfileSpace,
    pub class: GameClass,
    pub mode: EnumerationMode,
    pub cap: u128,
}

impl EnumerationSpec {
    pub fn exhaustive(space: ProfileSpace, class: GameClass) -> Self {
        Self {
            space,
            class,
            mode: EnumerationMode::Exhaustive,
            cap: DEFAULT_STRUCTURE_CAP,
        }
    }

    pub fn sampled(space: ProfileSpace, class: GameClass, count: usize, seed: u64) -> Self {
        Self {
            space,
            class,
            mode: EnumerationMode::Sampled { count, seed },
            cap: DEFAULT_STRUCTURE_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    /// How many items the stream emits.
    pub fn len(&self) -> Result<u128> {
        match self.mode {
            EnumerationMode::Exhaustive => {
                let total = count_structures(&self.space, self.class)?;
                check_cap(total, self.cap)?;
                Ok(total)
            }
            EnumerationMode::Sampled { count, .. } => Ok(count as u128),
        }
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.len()? == 0)
    }
}

fn check_cap(total: u128, cap: u128) -> Result<()> {
    if total > cap {
        return Err(Error::Resource {
            what: "exhaustive structure enumeration",
            required: total.to_string(),
            budget: cap.to_string(),
        });
    }
    Ok(())
}

fn choices(space: &ProfileSpace, class: GameClass, player: usize) -> u128 {
    let k = space.actions(player) as u32;
    match class {
        GameClass::All => (1u128 << k) - 1,
        GameClass::Generic => k as u128,
    }
}

fn overflow(space: &ProfileSpace) -> Error {
    Error::Resource {
        what: "structure count",
        required: format!("at least 2^128 structures for {space}"),
        budget: "2^128 - 1".into(),
    }
}

/// `prod_i c_i^(prod_{j != i} k_j)` with `c_i = 2^{k_i} - 1` for class all and
/// `c_i = k_i` for class generic.
pub fn count_structures(space: &ProfileSpace, class: GameClass) -> Result<u128> {
    let mut total: u128 = 1;
    for i in 0..space.players() {
        let exponent = u32::try_from(space.opponent_count(i)).map_err(|_| overflow(space))?;
        let per_player = choices(space, class, i)
            .checked_pow(exponent)
            .ok_or_else(|| overflow(space))?;
        total = total.checked_mul(per_player).ok_or_else(|| overflow(space))?;
    }
    Ok(total)
}

fn set_for_choice(class: GameClass, digit: u128) -> ActionSet {
    match class {
        GameClass::All => ActionSet::from_bits(digit as u64 + 1),
        GameClass::Generic => ActionSet::singleton(digit as usize),
    }
}

/// The structure with the given exhaustive-enumeration index.
pub fn structure_at(space: &ProfileSpace, class: GameClass, index: u128) -> Result<BestReplyStructure> {
    let total = count_structures(space, class)?;
    if index >= total {
        return Err(Error::InvalidInput(format!(
            "structure index {index} out of range for {total} structures"
        )));
    }
    let mut rest = index;
    let mut tables: Vec<Vec<ActionSet>> = (0..space.players())
        .map(|i| vec![ActionSet::EMPTY; space.opponent_count(i)])
        .collect();
    for i in (0..space.players()).rev() {
        let radix = choices(space, class, i);
        for slot in tables[i].iter_mut().rev() {
            *slot = set_for_choice(class, rest % radix);
            rest /= radix;
        }
    }
    Ok(BestReplyStructure::from_tables_unchecked(space.clone(), tables))
}

/// Inverse of [`structure_at`] for structures of the given class.
pub fn structure_index(structure: &BestReplyStructure, class: GameClass) -> Result<u128> {
    let space = structure.space();
    let mut index: u128 = 0;
    for i in 0..space.players() {
        let radix = choices(space, class, i);
        for set in structure.table(i) {
            let digit = match class {
                GameClass::All => set.bits() as u128 - 1,
                GameClass::Generic if set.len() == 1 => set.smallest().expect("singleton") as u128,
                GameClass::Generic => {
                    return Err(Error::InvalidInput(
                        "structure is not generic".into(),
                    ))
                }
            };
            index = index * radix + digit;
        }
    }
    Ok(index)
}

fn sample_structure<R: Rng>(space: &ProfileSpace, class: GameClass, rng: &mut R) -> BestReplyStructure {
    let tables = (0..space.players())
        .map(|i| {
            let radix = choices(space, class, i) as u64;
            (0..space.opponent_count(i))
                .map(|_| set_for_choice(class, rng.gen_range(0..radix) as u128))
                .collect()
        })
        .collect();
    BestReplyStructure::from_tables_unchecked(space.clone(), tables)
}

/// Stream of structures: each exactly once in index order (exhaustive) or
/// i.i.d. uniform from a seeded generator (sampled).
pub fn enumerate_structures(spec: &EnumerationSpec) -> Result<Box<dyn Iterator<Item = BestReplyStructure> + Send>> {
    let len = spec.len()?;
    let space = spec.space.clone();
    let class = spec.class;
    Ok(match spec.mode {
        EnumerationMode::Exhaustive => Box::new(
            (0..len).map(move |i| structure_at(&space, class, i).expect("index below count")),
        ),
        EnumerationMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..count).map(move |_| sample_structure(&space, class, &mut rng)))
        }
    })
}

/// The 0/1 game whose best replies are exactly the structure's sets.
pub fn realize_game(structure: &BestReplyStructure) -> Game {
    let space = structure.space().clone();
    let payoffs = (0..space.players())
        .map(|i| {
            space
                .indices()
                .map(|x| structure.get(i, x).contains(space.action_at(x, i)) as i64)
                .collect()
        })
        .collect();
    Game::new(space, payoffs).expect("realized payoffs match the space")
}

/// Payoffs i.i.d. uniform on `0..PAYOFF_RANGE`; class generic rejection-samples
/// until the game is generic.
pub fn random_game(space: &ProfileSpace, seed: u64, class: GameClass) -> Result<Game> {
    random_game_in_range(space, seed, class, PAYOFF_RANGE)
}

pub fn random_game_in_range(space: &ProfileSpace, seed: u64, class: GameClass, range: i64) -> Result<Game> {
    if range < 1 {
        return Err(Error::InvalidInput(format!("payoff range {range} is empty")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DEFAULT_REJECTION_CAP {
        let payoffs = (0..space.players())
            .map(|_| space.indices().map(|_| rng.gen_range(0..range)).collect())
            .collect();
        let game = Game::new(space.clone(), payoffs)?;
        if class == GameClass::All || game.is_generic() {
            return Ok(game);
        }
    }
    Err(Error::Resource {
        what: "generic rejection sampling",
        required: format!("more than {DEFAULT_REJECTION_CAP} attempts"),
        budget: DEFAULT_REJECTION_CAP.to_string(),
    })
}
