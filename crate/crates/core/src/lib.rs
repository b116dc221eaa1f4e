//! Bounded-recall uncoupled game dynamics and exact self-stabilization checking.
//!
//! The crate is organised bottom-up:
//!
//! - [`game`]: profile spaces, integer-payoff games, best replies, PNE,
//!   genericity, dominance and best-reply structures.
//! - [`dynamics`]: strategy mappings (the canonical historyless mapping `h`,
//!   the deterministic 3-recall and 2-recall protocols, padding reductions).
//! - [`analysis`]: positive-probability transition graphs over recall states,
//!   reachability, success verdicts and seeded simulation.
//! - [`generators`]: exhaustive and sampled best-reply structures and random games.
//! - [`fixtures`]: named counterexample games and the adversarial construction
//!   against deterministic historyless mappings.
//! - [`io`]: game files, structure serialization and report records.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod generators;
pub mod io;

pub use error::{Error, Result};
pub use game::{ActionSet, BestReplyStructure, Game, Profile, ProfileSpace};
