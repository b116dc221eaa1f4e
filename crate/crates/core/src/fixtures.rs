//! Named counterexample games and the adversarial construction against
//! deterministic historyless mappings.
//!
//! Every fixture carries the PNE set and expected outcomes it is known for;
//! [`Fixture::load`] rebuilds the game and re-checks the PNE annotation
//! against [`Game::find_pne`].

use std::fmt;

use crate::analysis::Outcome;
use crate::dynamics::StrategyMapping;
use crate::error::{invalid, Error, Result};
use crate::game::{Game, Profile, ProfileSpace};

fn one_based(actions: &[usize]) -> Profile {
    Profile::from_one_based(actions).expect("fixture profiles are 1-based")
}

/// Payoff tuples `M_x[y][z]` of the three-player 2x2x2 game in which player 3,
/// once playing 2, never has a reason to switch.
const LEMMA10_MATRICES: [[[[i64; 3]; 2]; 2]; 2] = [
    [[[1, 1, 1], [1, 0, 1]], [[1, 0, 0], [0, 1, 1]]],
    [[[0, 1, 0], [0, 1, 1]], [[0, 0, 0], [1, 0, 1]]],
];

/// 2x2x2 game with unique PNE (1,1,1), not reachable under `h` from (1,1,2).
pub fn lemma10_game() -> Game {
    let space = ProfileSpace::new(vec![2, 2, 2]).expect("valid space");
    Game::from_fn(space, |i, p| {
        let a = p.actions();
        LEMMA10_MATRICES[a[0]][a[1]][a[2]][i]
    })
    .with_name("lemma10")
}

/// 2x2xk3xk4 game: player 1 matches player 2, players 3 and 4 match each other,
/// and player 2 matches player 1 except when players 3 and 4 both play 1.
pub fn lemma14_game(k3: usize, k4: usize) -> Result<Game> {
    if k3 < 2 || k4 < 2 {
        return Err(invalid(format!(
            "lemma14 needs k3, k4 >= 2, got ({k3}, {k4})"
        )));
    }
    let space = ProfileSpace::new(vec![2, 2, k3, k4])?;
    Ok(Game::from_fn(space, |i, p| {
        let a = p.actions();
        let match12 = a[0] == a[1];
        let match34 = a[2] == a[3];
        let both_first = a[2] == 0 && a[3] == 0;
        (match i {
            0 => match12,
            1 => match12 ^ both_first,
            _ => match34,
        }) as i64
    })
    .with_name(format!("lemma14({k3},{k4})")))
}

/// Payoff tuples of the 3x3x3 base game, indexed `[x][y][z]`.
const LEMMA15_MATRICES: [[[[i64; 3]; 3]; 3]; 3] = [
    [
        [[0, 0, 0], [0, 4, 4], [2, 1, 2]],
        [[4, 4, 0], [4, 0, 4], [3, 1, 3]],
        [[1, 2, 3], [1, 3, 3], [0, 0, 0]],
    ],
    [
        [[4, 0, 4], [4, 4, 0], [3, 1, 3]],
        [[0, 4, 4], [0, 0, 0], [2, 1, 2]],
        [[1, 3, 3], [1, 2, 2], [0, 0, 0]],
    ],
    [
        [[2, 2, 1], [3, 3, 1], [0, 0, 0]],
        [[3, 3, 1], [2, 2, 1], [0, 0, 0]],
        [[0, 0, 0], [0, 0, 0], [6, 6, 6]],
    ],
];

/// The 3x3x3 base game padded to `k1 x k2 x k3`: a player's extra actions pay
/// it 0, and everybody else treats them as that player's action 3.
pub fn lemma15_game(k1: usize, k2: usize, k3: usize) -> Result<Game> {
    if k1 < 3 || k2 < 3 || k3 < 3 {
        return Err(invalid(format!(
            "lemma15 needs every k >= 3, got ({k1}, {k2}, {k3})"
        )));
    }
    let space = ProfileSpace::new(vec![k1, k2, k3])?;
    Ok(Game::from_fn(space, |i, p| {
        let a = p.actions();
        if a[i] > 2 {
            0
        } else {
            LEMMA15_MATRICES[a[0].min(2)][a[1].min(2)][a[2].min(2)][i]
        }
    })
    .with_name(format!("lemma15({k1},{k2},{k3})")))
}

fn theorem18_base(k: usize) -> Result<Game> {
    if k < 2 {
        return Err(invalid(format!("theorem18 needs k >= 2, got {k}")));
    }
    let space = ProfileSpace::new(vec![2, k])?;
    Ok(Game::from_fn(space, |i, p| {
        let a = p.actions();
        (match i {
            0 => a[0] == 0,
            _ => (a[0] == 0 && a[1] == 0) || (a[0] == 1 && a[1] >= 1),
        }) as i64
    })
    .with_name(format!("theorem18-u({k})")))
}

/// Builds the pair `(U, U')` on `{1,2} x {1..k}` against a deterministic
/// historyless mapping `f`.
///
/// In `U` player 1 wants action 1 and player 2 wants 1 against 1 and any
/// action from 2 on against 2. `U'` raises player 1's payoff at `(2, b)` to 2
/// for every `b >= 2` where `f`'s player-2 strategy for `U` answers `(1, b)`
/// with 1. Player 2's payoffs are unchanged, so an uncoupled `f` gives player 2
/// the same strategy in both games.
pub fn theorem18_adversary(mapping: &dyn StrategyMapping, k: usize) -> Result<(Game, Game)> {
    if mapping.recall() != 1 || !mapping.is_deterministic() {
        return Err(Error::Unsupported(format!(
            "the adversary needs a deterministic historyless mapping; {} has recall {} and is {}deterministic",
            mapping.name(),
            mapping.recall(),
            if mapping.is_deterministic() { "" } else { "not " }
        )));
    }
    let u = theorem18_base(k)?;
    mapping.supports(u.space())?;
    let space = u.space().clone();
    let second = mapping.player_strategy(u.player_payoffs(1))?;
    let mut u1 = u.payoffs()[0].clone();
    for b in 1..k {
        let at = space.index_of(&Profile(vec![0, b]))?;
        let answer = second.next(&[at]).point_mass().ok_or_else(|| {
            Error::Unsupported(format!("{} returned a mixed action", mapping.name()))
        })?;
        if answer == 0 {
            u1[space.index_of(&Profile(vec![1, b]))?] = 2;
        }
    }
    let uprime = Game::new(space, vec![u1, u.payoffs()[1].clone()])?
        .with_name(format!("theorem18-uprime({k},{})", mapping.name()));
    Ok((u, uprime))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Lemma10,
    Lemma14,
    Lemma15,
    /// The base game `U` of the adversary construction.
    Theorem18U,
    /// The modified game `U'`, built against the min-best-reply mapping.
    Theorem18UPrime,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 5] = [
        FixtureKind::Lemma10,
        FixtureKind::Lemma14,
        FixtureKind::Lemma15,
        FixtureKind::Theorem18U,
        FixtureKind::Theorem18UPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::Lemma10 => "lemma10",
            FixtureKind::Lemma14 => "lemma14",
            FixtureKind::Lemma15 => "lemma15",
            FixtureKind::Theorem18U => "theorem18-u",
            FixtureKind::Theorem18UPrime => "theorem18-uprime",
        }
    }

    pub fn default_params(self) -> Vec<usize> {
        match self {
            FixtureKind::Lemma10 => vec![],
            FixtureKind::Lemma14 => vec![2, 2],
            FixtureKind::Lemma15 => vec![3, 3, 3],
            FixtureKind::Theorem18U | FixtureKind::Theorem18UPrime => vec![2],
        }
    }
}

impl std::str::FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FixtureKind::ALL.iter().map(|k| k.name()).collect();
                invalid(format!("unknown fixture {s:?}; known: {}", names.join(", ")))
            })
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A loaded fixture with its annotations.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub params: Vec<usize>,
    pub game: Game,
    pub pne: Vec<Profile>,
    /// A historyless state from which `h` cannot reach a PNE.
    pub witness: Option<Profile>,
    /// Known outcomes, keyed by strategy name.
    pub expectations: Vec<(&'static str, Outcome)>,
}

impl Fixture {
    pub fn load(kind: FixtureKind, params: &[usize]) -> Result<Self> {
        let params = if params.is_empty() {
            kind.default_params()
        } else {
            params.to_vec()
        };
        let arity = kind.default_params().len();
        if params.len() != arity {
            return Err(invalid(format!(
                "fixture {kind} takes {arity} parameters, got {}",
                params.len()
            )));
        }
        let deterministic_protocols = [("det3", Outcome::SelfStabilizes), ("det2", Outcome::SelfStabilizes)];
        let fixture = match kind {
            FixtureKind::Lemma10 => Fixture {
                kind,
                params: params.clone(),
                game: lemma10_game(),
                pne: vec![one_based(&[1, 1, 1])],
                witness: Some(one_based(&[1, 1, 2])),
                expectations: [("h", Outcome::Fails)]
                    .into_iter()
                    .chain(deterministic_protocols)
                    .collect(),
            },
            FixtureKind::Lemma14 => {
                let (k3, k4) = (params[0], params[1]);
                let pne = (0..2)
                    .flat_map(|c| (1..k3.min(k4)).map(move |m| Profile(vec![c, c, m, m])))
                    .collect();
                Fixture {
                    kind,
                    params: params.clone(),
                    game: lemma14_game(k3, k4)?,
                    pne,
                    witness: Some(one_based(&[1, 1, 1, 1])),
                    expectations: [("h", Outcome::Fails)]
                        .into_iter()
                        .chain(deterministic_protocols)
                        .collect(),
                }
            }
            FixtureKind::Lemma15 => Fixture {
                kind,
                params: params.clone(),
                game: lemma15_game(params[0], params[1], params[2])?,
                pne: vec![one_based(&[3, 3, 3])],
                witness: Some(one_based(&[1, 2, 1])),
                expectations: [("h", Outcome::Fails)]
                    .into_iter()
                    .chain(deterministic_protocols)
                    .collect(),
            },
            FixtureKind::Theorem18U | FixtureKind::Theorem18UPrime => {
                let k = params[0];
                let mapping = crate::dynamics::MinBestReply;
                let (u, uprime) = theorem18_adversary(&mapping, k)?;
                let is_prime = kind == FixtureKind::Theorem18UPrime;
                let game = if is_prime { uprime } else { u };
                let mut pne = vec![one_based(&[1, 1])];
                if is_prime {
                    // Player 1's raised payoffs turn (2, b) into equilibria.
                    let space = game.space();
                    pne.extend(
                        (1..k)
                            .map(|b| Profile(vec![1, b]))
                            .filter(|p| game.payoff(0, space.index_of(p).expect("in range")) == 2),
                    );
                }
                let mut expectations: Vec<(&'static str, Outcome)> = [("h", Outcome::SelfStabilizes)]
                    .into_iter()
                    .chain(deterministic_protocols)
                    .collect();
                if is_prime {
                    expectations.push(("min-br", Outcome::Fails));
                }
                Fixture {
                    kind,
                    params: params.clone(),
                    game,
                    pne,
                    witness: None,
                    expectations,
                }
            }
        };
        let found = fixture.game.find_pne();
        if found != fixture.pne {
            return Err(invalid(format!(
                "fixture {kind}{:?}: annotated PNE {:?} but the game has {:?}",
                fixture.params,
                fixture.pne.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                found.iter().map(|p| p.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(fixture)
    }

    pub fn expected_outcome(&self, strategy: &str) -> Option<Outcome> {
        self.expectations
            .iter()
            .find(|(name, _)| *name == strategy)
            .map(|&(_, o)| o)
    }
}
