//! Redundant parents and reduced CP-nets.
//!
//! A parent `Y` of `X` is redundant when, for every assignment to the other
//! parents, all values of `Y` select the same row of `X`'s table. Dropping a
//! redundant parent leaves every lookup unchanged. A net is reduced when no
//! variable has a redundant parent.

use crate::error::{Error, Result};
use crate::model::{CpNet, PreferenceTable, VarId};
use crate::radix::MixedRadix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RedundancyFinding {
    pub child: VarId,
    pub redundant_parent: VarId,
}

/// Exhaustive row comparison for the parent at position `k` of `x`'s list.
fn parent_is_redundant(net: &CpNet, x: VarId, k: usize) -> bool {
    let table = net.table(x);
    table.entries().all(|(key, row)| {
        if key[k] == 0 {
            return true;
        }
        let mut base = key;
        base[k] = 0;
        table.row(&base) == row
    })
}

/// Every parent of `x` that is individually redundant, in ascending order.
pub fn redundant_parents(net: &CpNet, x: VarId) -> Vec<RedundancyFinding> {
    net.parents(x)
        .iter()
        .enumerate()
        .filter(|&(k, _)| parent_is_redundant(net, x, k))
        .map(|(_, &y)| RedundancyFinding { child: x, redundant_parent: y })
        .collect()
}

/// All findings over all variables, ordered by child then parent.
pub fn all_redundancies(net: &CpNet) -> Vec<RedundancyFinding> {
    net.var_ids().flat_map(|x| redundant_parents(net, x)).collect()
}

/// Removes the redundant parent `y` from `x`, re-keying `x`'s table on the
/// remaining parents. Refuses when `y` is not a parent or not redundant.
pub fn drop_parent(net: &CpNet, x: VarId, y: VarId) -> Result<CpNet> {
    let table = net.table(x);
    let Some(k) = table.parents().iter().position(|&p| p == y) else {
        return Err(Error::NotAParent { child: net.name(x).into(), parent: net.name(y).into() });
    };
    if !parent_is_redundant(net, x, k) {
        return Err(Error::NotRedundant { child: net.name(x).into(), parent: net.name(y).into() });
    }
    let mut parents = table.parents().to_vec();
    parents.remove(k);
    let mut radices = table.key_space().radices().to_vec();
    radices.remove(k);
    let keys = MixedRadix::new(radices);
    let rows = keys
        .iter()
        .map(|mut key| {
            key.insert(k, 0);
            table.row(&key).clone()
        })
        .collect();
    Ok(net.with_table(x, PreferenceTable::from_parts(parents, keys, rows)))
}

/// `r(N)`: drops redundant parents until none remain, always taking the
/// lowest-indexed variable and then its lowest-indexed redundant parent.
pub fn reduce(net: &CpNet) -> CpNet {
    reduce_with(net, |_| 0)
}

/// Like [`reduce`] but lets `choose` pick which of the current findings to
/// apply next; it receives the non-empty list from [`all_redundancies`].
pub fn reduce_with(net: &CpNet, mut choose: impl FnMut(&[RedundancyFinding]) -> usize) -> CpNet {
    let mut current = net.clone();
    loop {
        let findings = all_redundancies(&current);
        if findings.is_empty() {
            return current;
        }
        let f = findings[choose(&findings).min(findings.len() - 1)];
        current = drop_parent(&current, f.child, f.redundant_parent).expect("finding is certified");
    }
}

pub fn is_reduced(net: &CpNet) -> bool {
    net.var_ids().all(|x| redundant_parents(net, x).is_empty())
}
