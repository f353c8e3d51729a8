//! Seeded random CP-nets and games.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::{Game, Player};
use crate::model::{CpNet, NetSpec, RowSpec, TotalOrder, VariableSpec};
use crate::radix::MixedRadix;

#[derive(Debug, Clone, PartialEq)]
pub struct NetConfig {
    pub vars: usize,
    pub min_domain: usize,
    pub max_domain: usize,
    pub max_parents: usize,
    /// Parents are drawn only among lower-indexed variables.
    pub acyclic: bool,
    /// Probability that a variable with parents is made insensitive to one
    /// of them.
    pub redundancy: f64,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig { vars: 3, min_domain: 2, max_domain: 2, max_parents: 2, acyclic: false, redundancy: 0.0 }
    }
}

fn random_order(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.shuffle(rng);
    ranking
}

/// Variables `X0, X1, …` with values `v0, v1, …`. Each variable draws a
/// parent-set size uniformly from `0..=max_parents` (capped by the eligible
/// variables), then a uniform subset of that size, then an independent
/// uniform permutation per row. Fails only when a table would exceed the
/// default row limit.
pub fn random_net(rng: &mut impl Rng, cfg: &NetConfig) -> Result<CpNet> {
    random_spec(rng, cfg).build()
}

pub fn random_net_seeded(seed: u64, cfg: &NetConfig) -> Result<CpNet> {
    random_net(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

/// The unbuilt spec behind [`random_net`], for callers with their own limits.
pub fn random_spec(rng: &mut impl Rng, cfg: &NetConfig) -> NetSpec {
    let sizes: Vec<usize> = (0..cfg.vars).map(|_| rng.gen_range(cfg.min_domain..=cfg.max_domain)).collect();
    let mut spec = NetSpec::default();
    for i in 0..cfg.vars {
        let eligible: Vec<usize> = if cfg.acyclic { (0..i).collect() } else { (0..cfg.vars).filter(|&j| j != i).collect() };
        let k = rng.gen_range(0..=cfg.max_parents.min(eligible.len()));
        let mut parents: Vec<usize> = index::sample(rng, eligible.len(), k).into_iter().map(|p| eligible[p]).collect();
        parents.sort_unstable();

        let keys = MixedRadix::new(parents.iter().map(|&p| sizes[p]).collect());
        let ignored = (!parents.is_empty() && rng.gen_bool(cfg.redundancy.clamp(0.0, 1.0)))
            .then(|| rng.gen_range(0..parents.len()));
        let mut rows: Vec<RowSpec> = Vec::with_capacity(keys.len().unwrap_or(0));
        for key in keys.iter() {
            let ranking = match ignored {
                Some(k) if key[k] != 0 => {
                    let mut base = key.clone();
                    base[k] = 0;
                    rows[keys.encode(&base)].ranking.clone()
                }
                _ => random_order(rng, sizes[i]),
            };
            rows.push(RowSpec { key, ranking });
        }
        spec.variables.push(VariableSpec {
            name: format!("X{i}"),
            values: (0..sizes[i]).map(|v| format!("v{v}")).collect(),
            parents,
            rows,
        });
    }
    spec
}

pub fn random_spec_seeded(seed: u64, cfg: &NetConfig) -> NetSpec {
    random_spec(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameConfig {
    pub players: usize,
    pub min_strategies: usize,
    pub max_strategies: usize,
}

/// Players `P0, P1, …` with strategies `s0, s1, …` and an independent
/// uniform order for every opponent profile.
pub fn random_game(rng: &mut impl Rng, cfg: &GameConfig) -> Game {
    let players: Vec<Player> = (0..cfg.players)
        .map(|i| {
            let n = rng.gen_range(cfg.min_strategies..=cfg.max_strategies);
            Player::new(&format!("P{i}"), (0..n).map(|s| format!("s{s}")))
        })
        .collect();
    let sizes: Vec<usize> = players.iter().map(|p| p.strategies.len()).collect();
    Game::from_fn(players, u128::MAX, |i, _| Ok(TotalOrder::new(random_order(rng, sizes[i])).expect("permutation")))
        .expect("generated games are well-formed")
}

pub fn random_game_seeded(seed: u64, cfg: &GameConfig) -> Game {
    random_game(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}
