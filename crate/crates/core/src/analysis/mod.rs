//! Exact decision procedures over positive-probability transition graphs.
//!
//! Success only depends on the support of each transition, so the graph
//! stores edges with positive probability and keeps the exact weights for
//! export and simulation.

mod graph;
mod simulate;
mod verdict;

pub use graph::{build_graph, node_count, TransitionGraph, DEFAULT_NODE_BUDGET};
pub use simulate::{
    is_absorbing_state, sample_exact, simulate, simulate_stream, trace_rng, Trace, RNG_ALGORITHM,
};
pub use verdict::{check_lemma12, decide_on_graph, decide_success, Outcome, Verdict, Witness};
