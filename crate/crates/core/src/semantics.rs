//! Flip semantics of CP-nets.
//!
//! A worsening flip changes the value of one variable to a value ranked
//! strictly lower in that variable's row at the current outcome. An outcome
//! `a` is better than `b` when a non-empty chain of worsening flips leads from
//! `a` to `b`; an outcome is optimal when no outcome is better than it.
//!
//! Betterness need not be irreflexive: on a cyclic net an outcome may be
//! better than itself.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::model::{CpNet, Outcome, VarId, DEFAULT_MAX_OUTCOMES};
use crate::radix::MixedRadix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Worsening,
    Improving,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Worsening => Direction::Improving,
            Direction::Improving => Direction::Worsening,
        }
    }
}

/// A single-variable value change between two outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flip {
    pub variable: VarId,
    pub from: usize,
    pub to: usize,
    pub direction: Direction,
}

impl Flip {
    pub fn reversed(self) -> Flip {
        Flip {
            variable: self.variable,
            from: self.to,
            to: self.from,
            direction: self.direction.reversed(),
        }
    }
}

/// All flips out of `o` in the given direction, ordered by variable index and
/// then from the most to the least preferred target value.
pub fn flips(net: &CpNet, o: &Outcome, direction: Direction) -> Vec<(Flip, Outcome)> {
    let mut out = Vec::new();
    for x in net.var_ids() {
        let order = net.lookup_order(x, o);
        let held = o.get(x);
        let held_rank = order.rank_of(held);
        let targets = match direction {
            Direction::Worsening => &order.ranking()[held_rank + 1..],
            Direction::Improving => &order.ranking()[..held_rank],
        };
        for &to in targets {
            let flip = Flip { variable: x, from: held, to, direction };
            out.push((flip, o.with(x, to)));
        }
    }
    out
}

pub fn worsening_flips(net: &CpNet, o: &Outcome) -> Vec<(Flip, Outcome)> {
    flips(net, o, Direction::Worsening)
}

pub fn improving_flips(net: &CpNet, o: &Outcome) -> Vec<(Flip, Outcome)> {
    flips(net, o, Direction::Improving)
}

/// A chain `o₀, …, o_k` (k ≥ 1) of worsening flips, witnessing `o₀ ≻ o_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetternessWitness {
    chain: Vec<Outcome>,
}

impl BetternessWitness {
    pub fn chain(&self) -> &[Outcome] {
        &self.chain
    }

    pub fn flip_count(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn start(&self) -> &Outcome {
        &self.chain[0]
    }

    pub fn end(&self) -> &Outcome {
        self.chain.last().expect("non-empty chain")
    }

    /// Re-checks every step against the net's tables.
    pub fn verify(&self, net: &CpNet) -> bool {
        self.chain.len() >= 2
            && self.chain.windows(2).all(|w| is_worsening_step(net, &w[0], &w[1]))
    }

    /// `self` witnesses `a ≻ b`, `next` witnesses `b ≻ c`; the result
    /// witnesses `a ≻ c`.
    pub fn concat(&self, next: &BetternessWitness) -> Option<BetternessWitness> {
        if self.end() != next.start() {
            return None;
        }
        let mut chain = self.chain.clone();
        chain.extend_from_slice(&next.chain[1..]);
        Some(BetternessWitness { chain })
    }
}

fn is_worsening_step(net: &CpNet, from: &Outcome, to: &Outcome) -> bool {
    if from.len() != net.len() || to.len() != net.len() {
        return false;
    }
    let mut changed = net.var_ids().filter(|&x| from.get(x) != to.get(x));
    match (changed.next(), changed.next()) {
        (Some(x), None) => net.lookup_order(x, from).prefers(from.get(x), to.get(x)),
        _ => false,
    }
}

/// A witness that `a ≻ b`, or `None` when no chain of worsening flips leads
/// from `a` to `b`.
pub fn better(net: &CpNet, a: &Outcome, b: &Outcome) -> Result<Option<BetternessWitness>> {
    better_within(net, a, b, DEFAULT_MAX_OUTCOMES)
}

/// Breadth-first search over the worsening-flip graph, so the witness is a
/// shortest chain. Refuses when the outcome space exceeds `max_outcomes`.
pub fn better_within(
    net: &CpNet,
    a: &Outcome,
    b: &Outcome,
    max_outcomes: u128,
) -> Result<Option<BetternessWitness>> {
    net.check_outcome(a)?;
    net.check_outcome(b)?;
    let count = net.check_outcome_count(max_outcomes)?;
    let space = net.outcome_space();
    let start = space.encode(a.values());
    let target = space.encode(b.values());

    // `start` is deliberately left unvisited so that a cycle back to it is found.
    let mut visited = FixedBitSet::with_capacity(count);
    let mut pred: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        let current = Outcome(space.decode(u));
        for (_, next) in worsening_flips(net, &current) {
            let v = space.encode(next.values());
            if visited.contains(v) {
                continue;
            }
            visited.insert(v);
            pred.insert(v, u);
            if v == target {
                return Ok(Some(rebuild_chain(&space, &pred, start, target)));
            }
            queue.push_back(v);
        }
    }
    Ok(None)
}

fn rebuild_chain(
    space: &MixedRadix,
    pred: &HashMap<usize, usize>,
    start: usize,
    target: usize,
) -> BetternessWitness {
    let mut codes = vec![target];
    let mut cur = target;
    loop {
        let p = pred[&cur];
        codes.push(p);
        if p == start {
            break;
        }
        cur = p;
    }
    codes.reverse();
    BetternessWitness {
        chain: codes.into_iter().map(|c| Outcome(space.decode(c))).collect(),
    }
}

/// Every outcome better than `o`, found by search over improving flips.
pub fn better_outcomes(net: &CpNet, o: &Outcome, max_outcomes: u128) -> Result<Vec<Outcome>> {
    net.check_outcome(o)?;
    let count = net.check_outcome_count(max_outcomes)?;
    let space = net.outcome_space();
    let mut visited = FixedBitSet::with_capacity(count);
    let mut queue = VecDeque::from([space.encode(o.values())]);
    while let Some(u) = queue.pop_front() {
        for (_, next) in improving_flips(net, &Outcome(space.decode(u))) {
            let v = space.encode(next.values());
            if !visited.put(v) {
                queue.push_back(v);
            }
        }
    }
    Ok(visited.ones().map(|c| Outcome(space.decode(c))).collect())
}

/// `true` iff no outcome is better than `o`.
///
/// `o' ≻ o` exactly when `o'` is reachable from `o` by a non-empty chain of
/// improving flips, and every such chain begins with a flip out of `o`.
pub fn is_optimal(net: &CpNet, o: &Outcome) -> bool {
    improving_flips(net, o).is_empty()
}

/// `true` iff every variable holds the top value of its row at `o`.
pub fn is_locally_optimal(net: &CpNet, o: &Outcome) -> bool {
    net.var_ids().all(|x| net.lookup_order(x, o).top() == o.get(x))
}

/// The improving-flip digraph over all outcomes, in compressed adjacency
/// form. Node `k` is the outcome with mixed-radix code `k`.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    space: MixedRadix,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl FlipGraph {
    pub fn build(net: &CpNet, direction: Direction, max_outcomes: u128) -> Result<FlipGraph> {
        let count = net.check_outcome_count(max_outcomes)?;
        let space = net.outcome_space();
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for code in 0..count {
            let o = Outcome(space.decode(code));
            targets.extend(flips(net, &o, direction).iter().map(|(_, n)| space.encode(n.values())));
            offsets.push(targets.len());
        }
        Ok(FlipGraph { space, offsets, targets })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn successors(&self, code: usize) -> &[usize] {
        &self.targets[self.offsets[code]..self.offsets[code + 1]]
    }

    pub fn outcome(&self, code: usize) -> Outcome {
        Outcome(self.space.decode(code))
    }
}

/// All optimal outcomes, by exhaustive construction of the improving-flip
/// graph. Refuses nets with more than the default outcome limit.
pub fn optimal_outcomes(net: &CpNet) -> Result<Vec<Outcome>> {
    optimal_outcomes_within(net, DEFAULT_MAX_OUTCOMES)
}

/// Outcomes whose improving-reachability set is empty, in ascending
/// mixed-radix order.
pub fn optimal_outcomes_within(net: &CpNet, max_outcomes: u128) -> Result<Vec<Outcome>> {
    let graph = FlipGraph::build(net, Direction::Improving, max_outcomes)?;
    Ok((0..graph.node_count())
        .filter(|&c| graph.successors(c).is_empty())
        .map(|c| graph.outcome(c))
        .collect())
}
