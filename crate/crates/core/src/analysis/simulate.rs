use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{Probability, RecallState, StrategyVector};
use crate::error::{invalid, Result};

/// Generator used for every simulation, recorded in each trace.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

/// A seeded generator for one trace. Distinct streams under one seed are
/// independent.
pub fn trace_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub rng: &'static str,
    pub seed: u64,
    pub stream: u64,
    /// Initial recall state, as profile indices.
    pub initial: Vec<usize>,
    /// Profiles played after the initial state, in order.
    pub profiles: Vec<usize>,
    /// Whether the run entered an absorbing state.
    pub absorbed: bool,
}

impl Trace {
    pub fn steps(&self) -> usize {
        self.profiles.len()
    }

    /// The full run: initial state followed by the sampled profiles.
    pub fn run(&self) -> impl Iterator<Item = usize> + '_ {
        self.initial.iter().chain(&self.profiles).copied()
    }
}

/// Draws from an exact discrete distribution by sampling an integer below the
/// common denominator.
pub fn sample_exact<R: Rng>(rng: &mut R, outcomes: &[(usize, Probability)]) -> usize {
    if let [(x, _)] = outcomes {
        return *x;
    }
    let denom = outcomes.iter().fold(1u64, |d, (_, p)| d.lcm(p.denom()));
    let mut u = rng.gen_range(0..denom);
    for &(x, p) in outcomes {
        let mass = p.numer() * (denom / p.denom());
        if u < mass {
            return x;
        }
        u -= mass;
    }
    unreachable!("probabilities sum to one")
}

/// Whether `state` repeats one profile that the strategy keeps with certainty.
pub fn is_absorbing_state(strategy: &StrategyVector, state: &RecallState) -> bool {
    let latest = state.latest();
    state.indices().iter().all(|&x| x == latest)
        && matches!(strategy.successors(state.indices()).as_slice(), [(q, _)] if *q == latest)
}

/// Samples up to `max_steps` profiles, stopping as soon as an absorbing state
/// is entered.
pub fn simulate(
    strategy: &StrategyVector,
    initial: &RecallState,
    max_steps: usize,
    seed: u64,
) -> Result<Trace> {
    simulate_stream(strategy, initial, max_steps, seed, 0)
}

pub fn simulate_stream(
    strategy: &StrategyVector,
    initial: &RecallState,
    max_steps: usize,
    seed: u64,
    stream: u64,
) -> Result<Trace> {
    if initial.recall() != strategy.recall() {
        return Err(invalid(format!(
            "initial state has recall {}, strategy {} has recall {}",
            initial.recall(),
            strategy.name(),
            strategy.recall()
        )));
    }
    for &x in initial.indices() {
        strategy.space().check_index(x)?;
    }
    let mut rng = trace_rng(seed, stream);
    let mut state = initial.clone();
    let mut profiles = Vec::new();
    let mut absorbed = is_absorbing_state(strategy, &state);
    while !absorbed && profiles.len() < max_steps {
        let next = sample_exact(&mut rng, &strategy.successors(state.indices()));
        profiles.push(next);
        state = state.shifted(next);
        absorbed = is_absorbing_state(strategy, &state);
    }
    Ok(Trace {
        rng: RNG_ALGORITHM,
        seed,
        stream,
        initial: initial.indices().to_vec(),
        profiles,
        absorbed,
    })
}
