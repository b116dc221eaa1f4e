use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::dynamics::{Probability, RecallState, StrategyVector};
use crate::error::{invalid, Error, Result};
use crate::game::{Game, ProfileSpace};

/// Default cap on `|A|^r`.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Positive-probability transition graph over all recall states `A^r`.
///
/// Node ids flatten the `r` profiles row-major with the oldest profile most
/// significant, so the successor of node `x` after profile `q` is
/// `(x mod |A|^(r-1)) * |A| + q`. Edges are stored in compressed rows,
/// sorted by target.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    space: ProfileSpace,
    recall: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<Probability>,
    pne_repeat: Vec<bool>,
}

/// Number of nodes `|A|^r`, or a resource error if it exceeds the budget.
pub fn node_count(space: &ProfileSpace, recall: usize, budget: usize) -> Result<usize> {
    let too_many = || Error::Resource {
        what: "transition graph nodes",
        required: format!("{}^{recall}", space.size()),
        budget: budget.to_string(),
    };
    let exponent = u32::try_from(recall).map_err(|_| too_many())?;
    let nodes = space.size().checked_pow(exponent).ok_or_else(too_many)?;
    if nodes > budget {
        return Err(Error::Resource {
            what: "transition graph nodes",
            required: nodes.to_string(),
            budget: budget.to_string(),
        });
    }
    Ok(nodes)
}

pub fn build_graph(strategy: &StrategyVector, game: &Game, budget: usize) -> Result<TransitionGraph> {
    if strategy.space() != game.space() {
        return Err(invalid("strategy and game have different profile spaces"));
    }
    let space = game.space().clone();
    let recall = strategy.recall();
    let nodes = node_count(&space, recall, budget)?;
    let size = space.size();
    let tail = nodes / size;
    let pne: Vec<bool> = space.indices().map(|x| game.is_pne_at(x)).collect();

    let mut offsets = Vec::with_capacity(nodes + 1);
    let mut targets = Vec::with_capacity(nodes);
    let mut weights = Vec::with_capacity(nodes);
    let mut pne_repeat = Vec::with_capacity(nodes);
    let mut state = vec![0usize; recall];
    offsets.push(0);
    for node in 0..nodes {
        decode_into(node, size, &mut state);
        pne_repeat.push(pne[state[0]] && state.iter().all(|&p| p == state[0]));
        let shifted = (node % tail) * size;
        for (q, w) in strategy.successors(&state) {
            targets.push(shifted + q);
            weights.push(w);
        }
        offsets.push(targets.len());
    }
    Ok(TransitionGraph {
        space,
        recall,
        offsets,
        targets,
        weights,
        pne_repeat,
    })
}

fn decode_into(mut node: usize, size: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = node % size;
        node /= size;
    }
}

impl TransitionGraph {
    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn recall(&self) -> usize {
        self.recall
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn edge_weights(&self, node: usize) -> &[Probability] {
        &self.weights[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn state(&self, node: usize) -> RecallState {
        let mut v = vec![0; self.recall];
        decode_into(node, self.space.size(), &mut v);
        RecallState::from_indices(&self.space, v).expect("node decodes into the space")
    }

    pub fn node_of(&self, state: &RecallState) -> Result<usize> {
        if state.recall() != self.recall {
            return Err(invalid(format!(
                "state has recall {}, graph has recall {}",
                state.recall(),
                self.recall
            )));
        }
        let size = self.space.size();
        let mut node = 0;
        for &x in state.indices() {
            self.space.check_index(x)?;
            node = node * size + x;
        }
        Ok(node)
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node >= self.node_count() {
            return Err(invalid(format!(
                "node {node} out of range for {} nodes",
                self.node_count()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn is_absorbing(&self, node: usize) -> bool {
        self.successors(node) == [node]
    }

    /// Whether the node is `r` copies of one PNE.
    pub fn is_pne_repeat(&self, node: usize) -> bool {
        self.pne_repeat[node]
    }

    pub fn absorbing_states(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&x| self.is_absorbing(x)).collect()
    }

    /// Absorbing nodes that repeat a PNE.
    pub fn absorbing_pne_states(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&x| self.pne_repeat[x] && self.is_absorbing(x))
            .collect()
    }

    /// Forward closure of `from`, including `from` itself, in increasing order.
    pub fn reachable_set(&self, from: usize) -> Result<Vec<usize>> {
        self.check_node(from)?;
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(x) = queue.pop_front() {
            for &y in self.successors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok(collect_marked(&seen))
    }

    /// Nodes from which some node in `targets` is reachable.
    pub fn can_reach(&self, targets: &[usize]) -> Vec<bool> {
        let n = self.node_count();
        let mut in_offsets = vec![0usize; n + 1];
        for &y in &self.targets {
            in_offsets[y + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut fill = in_offsets.clone();
        let mut sources = vec![0usize; self.targets.len()];
        for x in 0..n {
            for &y in self.successors(x) {
                sources[fill[y]] = x;
                fill[y] += 1;
            }
        }
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &t in targets {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
        while let Some(y) = queue.pop_front() {
            for &x in &sources[in_offsets[y]..in_offsets[y + 1]] {
                if !seen[x] {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        seen
    }

    /// Graphviz rendering. Labels use 1-based actions; absorbing PNE repeats
    /// are drawn as double circles, other absorbing states as boxes.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  node [shape=ellipse];");
        for x in 0..self.node_count() {
            let label = self.state(x).display(&self.space).to_string();
            let attrs = match (self.is_absorbing(x), self.pne_repeat[x]) {
                (true, true) => ", shape=doublecircle, style=filled, fillcolor=palegreen",
                (true, false) => ", shape=box",
                _ => "",
            };
            let _ = writeln!(out, "  n{x} [label=\"{label}\"{attrs}];");
        }
        for x in 0..self.node_count() {
            for (&y, w) in self.successors(x).iter().zip(self.edge_weights(x)) {
                if w == &Probability::from_integer(1) {
                    let _ = writeln!(out, "  n{x} -> n{y};");
                } else {
                    let _ = writeln!(out, "  n{x} -> n{y} [label=\"{w}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn collect_marked(marks: &[bool]) -> Vec<usize> {
    marks
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}
