//! Strategic games with parametrized preferences.
//!
//! Each player holds, for every joint strategy of its opponents, a strict
//! linear order over its own strategies. A joint strategy is a (pure) Nash
//! equilibrium when every player's strategy tops the order selected by the
//! other players' strategies.
//!
//! [`cpnet_to_game`] and [`game_to_cpnet`] translate between games and
//! CP-nets, identifying player `i` with variable `i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    is_identifier, is_value_token, CpNet, Domain, Limits, Outcome, PreferenceTable, TotalOrder,
    VarId, Variable, DEFAULT_MAX_OUTCOMES,
};
use crate::radix::MixedRadix;

/// One strategy index per player, in player order.
pub type JointStrategy = Outcome;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Player {
    pub name: String,
    pub strategies: Domain,
}

impl Player {
    pub fn new<S: Into<String>>(name: &str, strategies: impl IntoIterator<Item = S>) -> Self {
        Player { name: name.to_string(), strategies: Domain::new(strategies) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game {
    players: Vec<Player>,
    /// `opponents[i]` enumerates `S₋ᵢ`, other players in ascending order.
    opponents: Vec<MixedRadix>,
    /// `prefs[i][code of s₋ᵢ]` is `≻(s₋ᵢ)` over player `i`'s strategies.
    prefs: Vec<Vec<TotalOrder>>,
}

fn opponent_space(players: &[Player], i: usize) -> MixedRadix {
    MixedRadix::new(
        players
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.strategies.len())
            .collect(),
    )
}

fn check_players(players: &[Player]) -> Result<()> {
    for (i, p) in players.iter().enumerate() {
        if !is_identifier(&p.name) {
            return Err(Error::InvalidGame(format!("`{}` is not a valid player name", p.name)));
        }
        if players[..i].iter().any(|q| q.name == p.name) {
            return Err(Error::InvalidGame(format!("player `{}` declared twice", p.name)));
        }
        if p.strategies.is_empty() {
            return Err(Error::InvalidGame(format!("player `{}` has no strategies", p.name)));
        }
        for (k, s) in p.strategies.values().iter().enumerate() {
            if !is_value_token(s) {
                return Err(Error::InvalidGame(format!("`{s}` is not a valid strategy name")));
            }
            if p.strategies.values()[..k].contains(s) {
                return Err(Error::InvalidGame(format!("strategy `{s}` listed twice for `{}`", p.name)));
            }
        }
    }
    Ok(())
}

impl Game {
    /// Builds a game from explicit preference tables; `prefs[i]` must hold
    /// one order per opponent profile, in mixed-radix order.
    pub fn new(players: Vec<Player>, prefs: Vec<Vec<TotalOrder>>) -> Result<Game> {
        check_players(&players)?;
        if prefs.len() != players.len() {
            return Err(Error::InvalidGame(format!(
                "{} players but {} preference tables",
                players.len(),
                prefs.len()
            )));
        }
        let opponents: Vec<MixedRadix> = (0..players.len()).map(|i| opponent_space(&players, i)).collect();
        for (i, (table, space)) in prefs.iter().zip(&opponents).enumerate() {
            if space.len() != Some(table.len()) {
                return Err(Error::InvalidGame(format!(
                    "player `{}` needs {} opponent profiles, got {}",
                    players[i].name,
                    space.size(),
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|o| o.len() != players[i].strategies.len()) {
                return Err(Error::InvalidGame(format!(
                    "an order of player `{}` ranks {} strategies instead of {}",
                    players[i].name,
                    bad.len(),
                    players[i].strategies.len()
                )));
            }
        }
        Ok(Game { players, opponents, prefs })
    }

    /// Builds a game by asking `order(i, s₋ᵢ)` for every player and profile.
    /// Refuses when some player has more than `max_profiles` opponent profiles.
    pub fn from_fn(
        players: Vec<Player>,
        max_profiles: u128,
        mut order: impl FnMut(usize, &[usize]) -> Result<TotalOrder>,
    ) -> Result<Game> {
        check_players(&players)?;
        let mut prefs = Vec::with_capacity(players.len());
        for i in 0..players.len() {
            let space = opponent_space(&players, i);
            if space.size() > max_profiles {
                return Err(Error::SizeLimit { what: "opponent profile space", count: space.size(), limit: max_profiles });
            }
            prefs.push(space.iter().map(|opp| order(i, &opp)).collect::<Result<Vec<_>>>()?);
        }
        Game::new(players, prefs)
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player(&self, i: usize) -> &Player {
        &self.players[i]
    }

    pub fn player_by_name(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p.name == name)
    }

    pub fn opponent_space(&self, i: usize) -> &MixedRadix {
        &self.opponents[i]
    }

    /// `≻(s₋ᵢ)` for an opponent profile listed in ascending player order.
    pub fn order(&self, i: usize, opponents: &[usize]) -> &TotalOrder {
        &self.prefs[i][self.opponents[i].encode(opponents)]
    }

    /// `≻(s₋ᵢ)` where `s₋ᵢ` is read off a joint strategy.
    pub fn order_at(&self, i: usize, s: &JointStrategy) -> &TotalOrder {
        let code = self.opponents[i]
            .encode_selected(s.values(), (0..self.players.len()).filter(|&j| j != i));
        &self.prefs[i][code]
    }

    pub fn orders(&self, i: usize) -> &[TotalOrder] {
        &self.prefs[i]
    }

    pub fn joint_space(&self) -> MixedRadix {
        MixedRadix::new(self.players.iter().map(|p| p.strategies.len()).collect())
    }

    pub fn joint_strategies(&self) -> impl Iterator<Item = JointStrategy> {
        let space = self.joint_space();
        let n = space.len().unwrap_or(usize::MAX);
        (0..n).map(move |code| Outcome(space.decode(code)))
    }

    pub fn check_joint(&self, s: &JointStrategy) -> Result<()> {
        if s.len() != self.players.len() {
            return Err(Error::OutcomeArity { expected: self.players.len(), got: s.len() });
        }
        for (i, p) in self.players.iter().enumerate() {
            if s.values()[i] >= p.strategies.len() {
                return Err(Error::UnknownValue { variable: p.name.clone(), value: format!("#{}", s.values()[i]) });
            }
        }
        Ok(())
    }

    /// `P1=x P2=y ...`
    pub fn format_joint(&self, s: &JointStrategy) -> String {
        self.players
            .iter()
            .zip(s.values())
            .map(|(p, &v)| format!("{}={}", p.name, p.strategies.value(v)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Opponent profile rendered with player names, e.g. `P2=C2`.
    pub fn format_profile(&self, i: usize, opponents: &[usize]) -> String {
        (0..self.players.len())
            .filter(|&j| j != i)
            .zip(opponents)
            .map(|(j, &v)| format!("{}={}", self.players[j].name, self.players[j].strategies.value(v)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::serialize_game(self))
    }
}

/// `s₋ᵢ`: the joint strategy with coordinate `i` deleted.
pub fn opponents_of(s: &JointStrategy, i: usize) -> Vec<usize> {
    s.values()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect()
}

/// `true` iff every player's strategy in `s` tops its order at `s₋ᵢ`, i.e.
/// `sᵢ ⪰(s₋ᵢ) s'ᵢ` for every alternative `s'ᵢ`.
pub fn is_nash(g: &Game, s: &JointStrategy) -> bool {
    (0..g.player_count()).all(|i| {
        let order = g.order_at(i, s);
        let held = s.values()[i];
        (0..g.player(i).strategies.len()).all(|alt| order.weakly_prefers(held, alt))
    })
}

pub fn nash_equilibria(g: &Game) -> Result<Vec<JointStrategy>> {
    nash_equilibria_within(g, DEFAULT_MAX_OUTCOMES)
}

/// Every pure Nash equilibrium, in ascending mixed-radix order.
pub fn nash_equilibria_within(g: &Game, max_joint: u128) -> Result<Vec<JointStrategy>> {
    let space = g.joint_space();
    if space.size() > max_joint {
        return Err(Error::SizeLimit { what: "joint strategy space", count: space.size(), limit: max_joint });
    }
    Ok(space.iter().map(Outcome).filter(|s| is_nash(g, s)).collect())
}

/// The game whose players are the net's variables and whose preference at
/// an opponent profile is the net's row at the parents' coordinates.
pub fn cpnet_to_game(net: &CpNet) -> Game {
    let players: Vec<Player> = net
        .variables()
        .iter()
        .map(|v| Player { name: v.name.clone(), strategies: v.domain.clone() })
        .collect();
    let n = players.len();
    let prefs = (0..n)
        .map(|i| {
            let x = VarId(i);
            let table = net.table(x);
            opponent_space(&players, i)
                .iter()
                .map(|opp| {
                    // player i's own coordinate is never a parent of X_i
                    let mut joint = opp;
                    joint.insert(i, 0);
                    table.row_for(&Outcome(joint)).clone()
                })
                .collect()
        })
        .collect();
    Game::new(players, prefs).expect("a valid net yields a well-formed game")
}

pub fn game_to_cpnet(g: &Game) -> Result<CpNet> {
    game_to_cpnet_with(g, &Limits::default())
}

/// The unreduced net of a game: every variable has all other variables as
/// parents, and the row for `s₋ᵢ` is `≻(s₋ᵢ)`.
pub fn game_to_cpnet_with(g: &Game, limits: &Limits) -> Result<CpNet> {
    let n = g.player_count();
    for i in 0..n {
        let rows = g.opponent_space(i).size();
        if rows > limits.max_table_rows as u128 {
            return Err(Error::SizeLimit {
                what: "preference table",
                count: rows,
                limit: limits.max_table_rows as u128,
            });
        }
    }
    let variables = g
        .players()
        .iter()
        .map(|p| Variable { name: p.name.clone(), domain: p.strategies.clone() })
        .collect();
    let tables = (0..n)
        .map(|i| {
            let parents = (0..n).filter(|&j| j != i).map(VarId).collect();
            PreferenceTable::from_parts(parents, g.opponent_space(i).clone(), g.orders(i).to_vec())
        })
        .collect();
    Ok(CpNet::from_parts(variables, tables))
}

/// Same players, same strategy sets, and the same order at every opponent
/// profile of every player.
pub fn games_equal(a: &Game, b: &Game) -> bool {
    a == b
}

/// Converts numeric payoffs to parametrized preferences: at every opponent
/// profile a player prefers the strategy with the higher payoff.
///
/// `payoffs(s)` returns one payoff per player for the joint strategy `s`.
/// Ties within one player's slice are rejected.
pub fn from_payoffs(players: Vec<Player>, mut payoffs: impl FnMut(&[usize]) -> Vec<f64>) -> Result<Game> {
    check_players(&players)?;
    let space = MixedRadix::new(players.iter().map(|p| p.strategies.len()).collect());
    let table: Vec<Vec<f64>> = space
        .iter()
        .map(|s| {
            let u = payoffs(&s);
            if u.len() != players.len() {
                return Err(Error::InvalidGame(format!(
                    "joint strategy has {} payoffs, expected {}",
                    u.len(),
                    players.len()
                )));
            }
            if u.iter().any(|x| x.is_nan()) {
                return Err(Error::InvalidGame("payoff is not a number".into()));
            }
            Ok(u)
        })
        .collect::<Result<_>>()?;
    let names = players.clone();
    Game::from_fn(players, u128::MAX, |i, opp| {
        let mut joint = opp.to_vec();
        joint.insert(i, 0);
        let mut scored: Vec<(usize, f64)> = (0..names[i].strategies.len())
            .map(|v| {
                joint[i] = v;
                (v, table[space.encode(&joint)][i])
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        if scored.windows(2).any(|w| w[0].1 == w[1].1) {
            let profile = (0..names.len())
                .filter(|&j| j != i)
                .zip(opp)
                .map(|(j, &v)| format!("{}={}", names[j].name, names[j].strategies.value(v)))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::PayoffTie { player: names[i].name.clone(), profile });
        }
        Ok(TotalOrder::new(scored.into_iter().map(|(v, _)| v).collect()).expect("permutation"))
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::semantics::optimal_outcomes;
    use crate::testnets::{self, outcome};

    /// Strategies C (index 0) and N (index 1); both players always prefer N.
    pub(crate) fn prisoners_dilemma() -> Game {
        let players = vec![Player::new("P1", ["C1", "N1"]), Player::new("P2", ["C2", "N2"])];
        let payoff = |s: &[usize]| match (s[0], s[1]) {
            (0, 0) => vec![3.0, 3.0],
            (0, 1) => vec![0.0, 4.0],
            (1, 0) => vec![4.0, 0.0],
            _ => vec![1.0, 1.0],
        };
        from_payoffs(players, payoff).unwrap()
    }

    #[test]
    fn payoff_import_matches_parametrized_orders() {
        let g = prisoners_dilemma();
        // ≻(C₂) = ≻(N₂) = N₁ ≻ C₁ and symmetrically for player 2
        for opp in 0..2 {
            assert_eq!(g.order(0, &[opp]).ranking(), &[1, 0]);
            assert_eq!(g.order(1, &[opp]).ranking(), &[1, 0]);
        }
    }

    #[test]
    fn prisoners_dilemma_equilibria() {
        let g = prisoners_dilemma();
        assert!(is_nash(&g, &Outcome(vec![1, 1])));
        assert!(!is_nash(&g, &Outcome(vec![0, 0])));
        assert_eq!(nash_equilibria(&g).unwrap(), vec![Outcome(vec![1, 1])]);
    }

    #[test]
    fn one_player_game() {
        let g = Game::new(vec![Player::new("P", ["x", "y"])], vec![vec![TotalOrder::identity(2)]]).unwrap();
        assert!(is_nash(&g, &Outcome(vec![0])));
        assert!(!is_nash(&g, &Outcome(vec![1])));
        let net = game_to_cpnet(&g).unwrap();
        assert_eq!(net.len(), 1);
        assert_eq!(net.table(VarId(0)).row_count(), 1);
    }

    #[test]
    fn opponents_deletes_one_coordinate() {
        assert_eq!(opponents_of(&Outcome(vec![0, 1]), 0), vec![1]);
        assert_eq!(opponents_of(&Outcome(vec![0, 1, 2, 3]), 1), vec![0, 2, 3]);
    }

    #[test]
    fn substitute_then_delete() {
        // exhaustive over up to 4 players with up to 3 strategies each
        for n in 1..=4usize {
            let space = MixedRadix::new(vec![3; n]);
            for s in space.iter() {
                let s = Outcome(s);
                for i in 0..n {
                    for alt in 0..3 {
                        assert_eq!(opponents_of(&s.with(VarId(i), alt), i), opponents_of(&s, i));
                    }
                }
            }
        }
    }

    #[test]
    fn dominant_strategies_give_single_equilibrium() {
        let players = vec![
            Player::new("P", ["p0", "p1", "p2"]),
            Player::new("Q", ["q0", "q1"]),
            Player::new("R", ["r0", "r1", "r2"]),
        ];
        let tops = [2usize, 0, 1];
        let g = Game::from_fn(players, u128::MAX, |i, _| {
            let n = [3, 2, 3][i];
            let mut ranking: Vec<usize> = (0..n).filter(|&v| v != tops[i]).collect();
            ranking.insert(0, tops[i]);
            Ok(TotalOrder::new(ranking).unwrap())
        })
        .unwrap();
        assert_eq!(nash_equilibria(&g).unwrap(), vec![Outcome(tops.to_vec())]);
    }

    #[test]
    fn cyclic_net_game_orders_depend_on_parents_only() {
        let net = testnets::cyclic4();
        let g = cpnet_to_game(&net);
        let b = 1;
        // opponents of B in order (A, C, D): (a, c, d) and (a, c̄, d̄)
        assert_eq!(g.order(b, &[0, 0, 0]).ranking(), &[0, 1]);
        assert_eq!(g.order(b, &[0, 1, 1]).ranking(), &[0, 1]);
        assert_eq!(g.order(b, &[1, 0, 0]).ranking(), &[1, 0]);
    }

    #[test]
    fn parentless_variable_has_constant_preferences() {
        let g = cpnet_to_game(&testnets::acyclic4());
        let first = g.orders(0)[0].clone();
        assert!(g.orders(0).iter().all(|o| *o == first));
    }

    #[test]
    fn translations_preserve_solutions_on_samples() {
        let net = testnets::cyclic4();
        let g = cpnet_to_game(&net);
        assert_eq!(nash_equilibria(&g).unwrap(), optimal_outcomes(&net).unwrap());
        assert_eq!(nash_equilibria(&g).unwrap(), vec![outcome(&net, &["a", "b", "c", "d"])]);

        let two = cpnet_to_game(&testnets::two_cycle());
        assert!(nash_equilibria(&two).unwrap().is_empty());

        let pd = prisoners_dilemma();
        let pd_net = game_to_cpnet(&pd).unwrap();
        assert_eq!(optimal_outcomes(&pd_net).unwrap(), vec![Outcome(vec![1, 1])]);
        // the statement X2 = C2 : N1 ≻ C1
        assert_eq!(pd_net.table(VarId(0)).row(&[0]).ranking(), &[1, 0]);
        assert_eq!(pd_net.parents(VarId(0)), &[VarId(1)]);
    }

    #[test]
    fn games_equal_detects_single_cell_change() {
        let g = prisoners_dilemma();
        assert!(games_equal(&g, &g.clone()));
        let mut prefs: Vec<Vec<TotalOrder>> = (0..2).map(|i| g.orders(i).to_vec()).collect();
        prefs[0][0] = prefs[0][0].reversed();
        let h = Game::new(g.players().to_vec(), prefs).unwrap();
        assert!(!games_equal(&g, &h));
    }

    #[test]
    fn reduced_and_unreduced_nets_give_equal_games() {
        let net = testnets::redundant3();
        let reduced = crate::reduction::reduce(&net);
        assert!(games_equal(&cpnet_to_game(&net), &cpnet_to_game(&reduced)));
    }

    #[test]
    fn payoff_ties_are_rejected() {
        let players = vec![Player::new("P1", ["x", "y"]), Player::new("P2", ["u", "v"])];
        let err = from_payoffs(players, |s| match (s[0], s[1]) {
            (0, 0) => vec![2.0, 1.0],
            (1, 0) => vec![2.0, 5.0],
            (0, 1) => vec![0.0, 2.0],
            _ => vec![1.0, 3.0],
        })
        .unwrap_err();
        assert_eq!(err, Error::PayoffTie { player: "P1".into(), profile: "P2=u".into() });
    }

    #[test]
    fn malformed_games_are_rejected() {
        assert!(Game::new(vec![Player::new("P", Vec::<String>::new())], vec![vec![]]).is_err());
        assert!(Game::new(vec![Player::new("P", ["x"]), Player::new("P", ["y"])], vec![vec![], vec![]]).is_err());
        let two = vec![Player::new("P", ["x", "y"]), Player::new("Q", ["u", "v"])];
        assert!(Game::new(two.clone(), vec![vec![TotalOrder::identity(2)], vec![TotalOrder::identity(2)]]).is_err());
        assert!(Game::new(two, vec![vec![TotalOrder::identity(3); 2], vec![TotalOrder::identity(2); 2]]).is_err());
    }

    #[test]
    fn full_parent_tables_respect_the_size_limit() {
        let players: Vec<Player> = (0..3).map(|i| Player::new(&format!("P{i}"), ["a", "b", "c"])).collect();
        let g = Game::from_fn(players, u128::MAX, |_, _| Ok(TotalOrder::identity(3))).unwrap();
        let tight = Limits { max_table_rows: 8, ..Limits::default() };
        assert!(game_to_cpnet_with(&g, &tight).unwrap_err().is_size_limit());
        assert!(game_to_cpnet(&g).is_ok());
    }
}
