//! Iterated elimination of suboptimal values.
//!
//! A value is a best response when it tops at least one row of its
//! variable's table, and a never-best-response otherwise. A value is strictly
//! dominated by another when the other ranks above it in every row. Removing
//! such values (and every row keyed by them) yields a subnet with the same
//! optimal outcomes.
//!
//! Also home of the forward sweep that solves acyclic nets directly.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CpNet, Outcome, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EliminationKind {
    NeverBestResponse,
    StrictlyDominated,
}

impl EliminationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EliminationKind::NeverBestResponse => "nbr",
            EliminationKind::StrictlyDominated => "dominated",
        }
    }
}

impl fmt::Display for EliminationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which eliminable value to remove next.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EliminationPolicy {
    /// Lowest variable index first, then lowest value index.
    #[default]
    LowestIndex,
    /// Uniformly random among all currently eliminable values.
    Shuffled { seed: u64 },
}

/// One removal. `removed_value` and `dominator` index the domain of the net
/// the step was applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub variable: VarId,
    pub removed_value: usize,
    pub kind: EliminationKind,
    pub dominator: Option<usize>,
    pub variable_name: String,
    pub value_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    pub initial: CpNet,
    pub steps: Vec<EliminationStep>,
    pub final_net: CpNet,
}

impl EliminationTrace {
    /// Every net along the chain, starting with `initial` and ending with
    /// the net after the last step.
    pub fn nets(&self) -> Result<Vec<CpNet>> {
        let mut nets = vec![self.initial.clone()];
        for step in &self.steps {
            let next = remove_value(nets.last().expect("non-empty"), step.variable, step.removed_value)?;
            nets.push(next);
        }
        Ok(nets)
    }

    /// Re-applies the steps to `initial`.
    pub fn replay(&self) -> Result<CpNet> {
        Ok(self.nets()?.pop().expect("non-empty"))
    }

    /// Checks that each step was justified in the net it was applied to.
    pub fn verify(&self) -> Result<bool> {
        let nets = self.nets()?;
        let justified = self.steps.iter().zip(&nets).all(|(step, net)| match step.kind {
            EliminationKind::NeverBestResponse => {
                !best_responses(net, step.variable).contains(&step.removed_value)
            }
            EliminationKind::StrictlyDominated => step.dominator.is_some_and(|d| {
                net.table(step.variable).rows().iter().all(|r| r.prefers(d, step.removed_value))
            }),
        });
        Ok(justified && nets.last() == Some(&self.final_net))
    }
}

/// Values of `x` that top at least one row of its table.
pub fn best_responses(net: &CpNet, x: VarId) -> BTreeSet<usize> {
    net.table(x).rows().iter().map(|r| r.top()).collect()
}

pub fn never_best_responses(net: &CpNet, x: VarId) -> BTreeSet<usize> {
    let best = best_responses(net, x);
    (0..net.domain(x).len()).filter(|v| !best.contains(v)).collect()
}

/// All `(dominated, dominator)` pairs of `x`, sorted.
pub fn strictly_dominated(net: &CpNet, x: VarId) -> Vec<(usize, usize)> {
    let rows = net.table(x).rows();
    let n = net.domain(x).len();
    let mut out = Vec::new();
    for dominated in 0..n {
        for dominator in 0..n {
            if dominator != dominated && rows.iter().all(|r| r.prefers(dominator, dominated)) {
                out.push((dominated, dominator));
            }
        }
    }
    out
}

/// The subnet without value `v` of `x`: `x`'s rows lose `v`, and every
/// row of a child of `x` keyed by `x = v` is deleted.
pub fn remove_value(net: &CpNet, x: VarId, v: usize) -> Result<CpNet> {
    let domain = net.domain(x);
    if v >= domain.len() {
        return Err(Error::UnknownValue { variable: net.name(x).into(), value: format!("#{v}") });
    }
    if domain.len() == 1 {
        return Err(Error::LastValue { variable: net.name(x).into(), value: domain.value(v).into() });
    }
    Ok(net.restrict_domain(x, v))
}

fn candidates(net: &CpNet, kind: EliminationKind) -> Vec<(VarId, usize, Option<usize>)> {
    let mut out = Vec::new();
    for x in net.var_ids() {
        match kind {
            EliminationKind::NeverBestResponse => {
                out.extend(never_best_responses(net, x).into_iter().map(|v| (x, v, None)));
            }
            EliminationKind::StrictlyDominated => {
                let mut last = None;
                for (dominated, dominator) in strictly_dominated(net, x) {
                    // keep the lowest dominator of each dominated value
                    if last != Some(dominated) {
                        out.push((x, dominated, Some(dominator)));
                        last = Some(dominated);
                    }
                }
            }
        }
    }
    out
}

/// Removes eliminable values one at a time until none is left.
pub fn eliminate(net: &CpNet, kind: EliminationKind, policy: EliminationPolicy) -> EliminationTrace {
    let mut rng = match policy {
        EliminationPolicy::Shuffled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        EliminationPolicy::LowestIndex => None,
    };
    let mut current = net.clone();
    let mut steps = Vec::new();
    loop {
        let found = candidates(&current, kind);
        let pick = match rng.as_mut() {
            None => found.first(),
            Some(rng) => found.choose(rng),
        };
        let Some(&(x, v, dominator)) = pick else {
            break;
        };
        steps.push(EliminationStep {
            variable: x,
            removed_value: v,
            kind,
            dominator,
            variable_name: current.name(x).to_string(),
            value_name: current.value_name(x, v).to_string(),
        });
        // a row's top value is always a best response, so a variable's last
        // value is never a candidate
        current = remove_value(&current, x, v).expect("eliminable value is never the last one");
    }
    EliminationTrace { initial: net.clone(), steps, final_net: current }
}

/// The single outcome of a net whose domains are all singletons.
pub fn unique_outcome(net: &CpNet) -> Option<Outcome> {
    net.var_ids()
        .all(|x| net.domain(x).len() == 1)
        .then(|| Outcome(vec![0; net.len()]))
}

/// Table lookups performed by a forward sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub lookups: usize,
}

/// The optimal outcome of an acyclic net: visiting variables parents-first,
/// each takes the top value of its row under the values already chosen.
pub fn solve_acyclic(net: &CpNet) -> Result<Outcome> {
    solve_acyclic_counted(net).map(|(o, _)| o)
}

pub fn solve_acyclic_counted(net: &CpNet) -> Result<(Outcome, SweepStats)> {
    let order = net.topological_order().ok_or(Error::Cyclic)?;
    sweep(net, &order)
}

/// Forward sweep in a caller-supplied order, which must list every variable
/// once with parents before children.
pub fn solve_acyclic_in_order(net: &CpNet, order: &[VarId]) -> Result<Outcome> {
    let mut placed = vec![false; net.len()];
    if order.len() != net.len() {
        return Err(Error::Malformed("sweep order must list every variable once".into()));
    }
    for &x in order {
        if x.index() >= net.len() || placed[x.index()] || net.parents(x).iter().any(|p| !placed[p.index()]) {
            return Err(Error::Malformed("sweep order is not a topological order".into()));
        }
        placed[x.index()] = true;
    }
    sweep(net, order).map(|(o, _)| o)
}

fn sweep(net: &CpNet, order: &[VarId]) -> Result<(Outcome, SweepStats)> {
    let mut stats = SweepStats::default();
    // unassigned coordinates are never read: only parents are, and they come first
    let mut outcome = Outcome(vec![0; net.len()]);
    for &x in order {
        let top = net.lookup_order(x, &outcome).top();
        stats.lookups += 1;
        outcome.0[x.index()] = top;
    }
    Ok((outcome, stats))
}
