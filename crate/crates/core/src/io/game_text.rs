//! The game format.
//!
//! ```text
//! player P1 = C1, N1
//! player P2 = C2, N2
//! prefs P1 | P2=C2 : N1 > C1
//! prefs P1 | P2=N2 : N1 > C1
//! prefs P2 | P1=C1 : N2 > C2
//! prefs P2 | P1=N1 : N2 > C2
//! ```
//!
//! or, instead of `prefs` lines, a payoff matrix with one row per joint
//! strategy:
//!
//! ```text
//! payoffs:
//!   (C1, C2) = 3, 3
//!   (C1, N2) = 0, 4
//!   (N1, C2) = 4, 0
//!   (N1, N2) = 1, 1
//! ```
//!
//! Players are numbered by the order of their `player` lines.

use std::collections::HashMap;

use super::{decode, strip_comment, word_list, Cursor, Diagnostic, ParseError};
use crate::error::Error;
use crate::game::{from_payoffs, Game, Player};
use crate::model::{is_identifier, TotalOrder};
use crate::radix::MixedRadix;

type Tok<'a> = (&'a str, usize);

struct PlayerDecl<'a> {
    line: usize,
    name: Tok<'a>,
    strategies: Vec<Tok<'a>>,
}

struct PrefsDecl<'a> {
    line: usize,
    player: Tok<'a>,
    profile: Vec<(Tok<'a>, Tok<'a>)>,
    order: Vec<Tok<'a>>,
}

struct PayoffRow<'a> {
    line: usize,
    column: usize,
    joint: Vec<Tok<'a>>,
    payoffs: Vec<(f64, usize)>,
}

#[derive(Default)]
struct Document<'a> {
    players: Vec<PlayerDecl<'a>>,
    prefs: Vec<PrefsDecl<'a>>,
    payoff_header: Option<usize>,
    payoffs: Vec<PayoffRow<'a>>,
}

fn parse_prefs<'a>(cur: &mut Cursor<'a>) -> Result<PrefsDecl<'a>, Diagnostic> {
    let player = cur.word("a player name")?;
    let mut profile = Vec::new();
    if cur.eat('|') && cur.peek() != Some(':') {
        loop {
            let who = cur.word("an opponent name")?;
            cur.expect('=')?;
            let what = cur.word("a strategy")?;
            profile.push((who, what));
            if !cur.eat(',') {
                break;
            }
        }
    }
    cur.expect(':')?;
    let mut order = vec![cur.word("a strategy")?];
    while cur.eat('>') {
        order.push(cur.word("a strategy")?);
    }
    cur.expect_end()?;
    Ok(PrefsDecl { line: cur.line, player, profile, order })
}

fn parse_payoff_row<'a>(cur: &mut Cursor<'a>) -> Result<PayoffRow<'a>, Diagnostic> {
    let column = cur.column();
    cur.expect('(')?;
    let joint = word_list(cur, "a strategy", false)?;
    cur.expect(')')?;
    cur.expect('=')?;
    let mut payoffs = vec![cur.number()?];
    while cur.eat(',') {
        payoffs.push(cur.number()?);
    }
    cur.expect_end()?;
    Ok(PayoffRow { line: cur.line, column, joint, payoffs })
}

fn parse_document(text: &str) -> (Document<'_>, Vec<Diagnostic>) {
    let mut doc = Document::default();
    let mut errors = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let mut cur = Cursor::new(i + 1, strip_comment(raw.strip_suffix('\r').unwrap_or(raw)));
        if cur.at_end() {
            continue;
        }
        let line = cur.line;
        let result = (|| -> Result<(), Diagnostic> {
            if cur.peek() == Some('(') {
                if doc.payoff_header.is_none() {
                    return Err(cur.error("payoff row outside of a `payoffs:` block"));
                }
                doc.payoffs.push(parse_payoff_row(&mut cur)?);
                return Ok(());
            }
            let (keyword, column) = cur.word("`player`, `prefs` or `payoffs`")?;
            match keyword {
                "player" => {
                    let name = cur.word("a player name")?;
                    cur.expect('=')?;
                    let strategies = word_list(&mut cur, "a strategy", false)?;
                    cur.expect_end()?;
                    doc.players.push(PlayerDecl { line, name, strategies });
                }
                "prefs" => {
                    if doc.payoff_header.is_some() {
                        return Err(cur.error_at(column, "`prefs` cannot be mixed with a `payoffs:` block"));
                    }
                    doc.prefs.push(parse_prefs(&mut cur)?);
                }
                "payoffs" => {
                    cur.expect(':')?;
                    cur.expect_end()?;
                    if doc.payoff_header.is_some() {
                        return Err(cur.error_at(column, "second `payoffs:` block"));
                    }
                    if !doc.prefs.is_empty() {
                        return Err(cur.error_at(column, "`payoffs:` cannot be mixed with `prefs` lines"));
                    }
                    doc.payoff_header = Some(line);
                }
                other => return Err(cur.error_at(column, format!("unknown declaration `{other}`"))),
            }
            Ok(())
        })();
        if let Err(e) = result {
            errors.push(e);
        }
    }
    (doc, errors)
}

fn diag(line: usize, column: usize, message: String) -> Diagnostic {
    Diagnostic { line, column, message }
}

fn game_error(line: usize, e: Error) -> Diagnostic {
    let message = match e {
        Error::InvalidGame(m) => m,
        other => other.to_string(),
    };
    diag(line, 1, message)
}

fn resolve_players(doc: &Document<'_>, errors: &mut Vec<Diagnostic>) -> (Vec<Player>, HashMap<String, usize>) {
    let mut players = Vec::new();
    let mut index = HashMap::new();
    for d in &doc.players {
        if !is_identifier(d.name.0) {
            errors.push(diag(d.line, d.name.1, format!("`{}` is not a valid player name", d.name.0)));
            continue;
        }
        if index.contains_key(d.name.0) {
            errors.push(diag(d.line, d.name.1, format!("player `{}` declared twice", d.name.0)));
            continue;
        }
        let mut seen: Vec<&str> = Vec::new();
        for &(s, col) in &d.strategies {
            if seen.contains(&s) {
                errors.push(diag(d.line, col, format!("strategy `{s}` listed twice")));
            }
            seen.push(s);
        }
        index.insert(d.name.0.to_string(), players.len());
        players.push(Player::new(d.name.0, d.strategies.iter().map(|s| s.0)));
    }
    (players, index)
}

fn resolve_prefs(
    doc: &Document<'_>,
    players: &[Player],
    index: &HashMap<String, usize>,
    errors: &mut Vec<Diagnostic>,
) -> Option<Game> {
    let spaces: Vec<MixedRadix> = (0..players.len())
        .map(|i| {
            MixedRadix::new((0..players.len()).filter(|&j| j != i).map(|j| players[j].strategies.len()).collect())
        })
        .collect();
    let mut tables: Vec<Vec<Option<TotalOrder>>> =
        spaces.iter().map(|s| vec![None; s.len().unwrap_or(0)]).collect();
    for p in &doc.prefs {
        let Some(&i) = index.get(p.player.0) else {
            errors.push(diag(p.line, p.player.1, format!("unknown player `{}`", p.player.0)));
            continue;
        };
        let mut profile: Vec<Option<usize>> = vec![None; players.len()];
        let mut ok = true;
        for &((who, wcol), (what, scol)) in &p.profile {
            let Some(&j) = index.get(who).filter(|&&j| j != i) else {
                errors.push(diag(p.line, wcol, format!("`{who}` is not an opponent of `{}`", p.player.0)));
                ok = false;
                break;
            };
            if profile[j].is_some() {
                errors.push(diag(p.line, wcol, format!("opponent `{who}` assigned twice")));
                ok = false;
                break;
            }
            match players[j].strategies.index_of(what) {
                Some(s) => profile[j] = Some(s),
                None => {
                    errors.push(diag(p.line, scol, format!("`{what}` is not a strategy of `{who}`")));
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Some(j) = (0..players.len()).find(|&j| j != i && profile[j].is_none()) {
            errors.push(diag(p.line, p.player.1, format!("profile does not assign opponent `{}`", players[j].name)));
            continue;
        }
        let mut ranking = Vec::new();
        for &(s, col) in &p.order {
            match players[i].strategies.index_of(s) {
                Some(v) => ranking.push(v),
                None => {
                    errors.push(diag(p.line, col, format!("`{s}` is not a strategy of `{}`", p.player.0)));
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let Some(order) = TotalOrder::new(ranking).filter(|o| o.len() == players[i].strategies.len()) else {
            errors.push(diag(p.line, p.player.1, "order does not rank every strategy exactly once".into()));
            continue;
        };
        let opp: Vec<usize> = profile.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.expect("checked")).collect();
        let code = spaces[i].encode(&opp);
        if tables[i][code].is_some() {
            errors.push(diag(p.line, p.player.1, "duplicate preference for this opponent profile".into()));
            continue;
        }
        tables[i][code] = Some(order);
    }
    let last_line = doc.players.last().map_or(1, |d| d.line);
    let mut prefs = Vec::with_capacity(players.len());
    for (i, table) in tables.into_iter().enumerate() {
        let mut orders = Vec::with_capacity(table.len());
        for (code, slot) in table.into_iter().enumerate() {
            match slot {
                Some(o) => orders.push(o),
                None => {
                    let line = doc.players.iter().find(|d| d.name.0 == players[i].name).map_or(last_line, |d| d.line);
                    let profile = describe(players, i, &spaces[i].decode(code));
                    errors.push(diag(line, 1, format!("player `{}` has no preference at ({profile})", players[i].name)));
                }
            }
        }
        prefs.push(orders);
    }
    if !errors.is_empty() {
        return None;
    }
    match Game::new(players.to_vec(), prefs) {
        Ok(g) => Some(g),
        Err(e) => {
            errors.push(game_error(last_line, e));
            None
        }
    }
}

fn describe(players: &[Player], i: usize, opp: &[usize]) -> String {
    (0..players.len())
        .filter(|&j| j != i)
        .zip(opp)
        .map(|(j, &v)| format!("{}={}", players[j].name, players[j].strategies.value(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn resolve_payoffs(doc: &Document<'_>, players: &[Player], header: usize, errors: &mut Vec<Diagnostic>) -> Option<Game> {
    let space = MixedRadix::new(players.iter().map(|p| p.strategies.len()).collect());
    let mut table: Vec<Option<Vec<f64>>> = vec![None; space.len().unwrap_or(0)];
    for row in &doc.payoffs {
        if row.joint.len() != players.len() {
            errors.push(diag(
                row.line,
                row.column,
                format!("joint strategy lists {} strategies, expected {}", row.joint.len(), players.len()),
            ));
            continue;
        }
        if row.payoffs.len() != players.len() {
            errors.push(diag(
                row.line,
                row.payoffs[0].1,
                format!("{} payoffs given, expected {}", row.payoffs.len(), players.len()),
            ));
            continue;
        }
        let mut joint = Vec::with_capacity(players.len());
        for (p, &(s, col)) in players.iter().zip(&row.joint) {
            match p.strategies.index_of(s) {
                Some(v) => joint.push(v),
                None => {
                    errors.push(diag(row.line, col, format!("`{s}` is not a strategy of `{}`", p.name)));
                    break;
                }
            }
        }
        if joint.len() != players.len() {
            continue;
        }
        let code = space.encode(&joint);
        if table[code].is_some() {
            errors.push(diag(row.line, row.column, "duplicate payoff row for this joint strategy".into()));
            continue;
        }
        table[code] = Some(row.payoffs.iter().map(|p| p.0).collect());
    }
    for (code, slot) in table.iter().enumerate() {
        if slot.is_none() {
            let joint = space.decode(code);
            let names: Vec<&str> = players.iter().zip(&joint).map(|(p, &v)| p.strategies.value(v)).collect();
            errors.push(diag(header, 1, format!("no payoff row for ({})", names.join(", "))));
        }
    }
    if !errors.is_empty() {
        return None;
    }
    match from_payoffs(players.to_vec(), |s| table[space.encode(s)].clone().expect("complete")) {
        Ok(g) => Some(g),
        Err(e) => {
            errors.push(game_error(header, e));
            None
        }
    }
}

pub fn parse_game(text: &str) -> Result<Game, ParseError> {
    let (doc, mut errors) = parse_document(text);
    if doc.players.is_empty() {
        if errors.is_empty() {
            return Err(ParseError::single(1, 1, "no players declared"));
        }
        return Err(ParseError(errors));
    }
    let (players, index) = resolve_players(&doc, &mut errors);
    if !errors.is_empty() {
        errors.sort_by_key(|d| (d.line, d.column));
        return Err(ParseError(errors));
    }
    let space = MixedRadix::new(players.iter().map(|p| p.strategies.len()).collect());
    if space.size() > crate::model::DEFAULT_MAX_OUTCOMES {
        return Err(ParseError::single(1, 1, format!("joint strategy space has {} elements, too large", space.size())));
    }
    let game = match doc.payoff_header {
        Some(header) => resolve_payoffs(&doc, &players, header, &mut errors),
        None => resolve_prefs(&doc, &players, &index, &mut errors),
    };
    match game {
        Some(g) => Ok(g),
        None => {
            errors.sort_by_key(|d| (d.line, d.column));
            Err(ParseError(errors))
        }
    }
}

pub fn parse_game_bytes(bytes: &[u8]) -> Result<Game, ParseError> {
    parse_game(decode(bytes)?)
}

/// Canonical text: `player` lines, then one `prefs` line per player and
/// opponent profile in mixed-radix order.
pub fn serialize_game(g: &Game) -> String {
    let mut out = String::new();
    for p in g.players() {
        out.push_str(&format!("player {} = {}\n", p.name, p.strategies.values().join(", ")));
    }
    for i in 0..g.player_count() {
        out.push('\n');
        let me = g.player(i);
        for (opp, order) in g.opponent_space(i).iter().zip(g.orders(i)) {
            let ranked: Vec<&str> = order.ranking().iter().map(|&v| me.strategies.value(v)).collect();
            let profile = g.format_profile(i, &opp);
            let sep = if profile.is_empty() { "" } else { " " };
            out.push_str(&format!("prefs {} | {profile}{sep}: {}\n", me.name, ranked.join(" > ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::prisoners_dilemma;

    const PAYOFFS: &str = "\
player P1 = C1, N1
player P2 = C2, N2
payoffs:
  (C1, C2) = 3, 3
  (C1, N2) = 0, 4
  (N1, C2) = 4, 0
  (N1, N2) = 1, 1
";

    #[test]
    fn payoff_block_matches_the_prisoners_dilemma() {
        assert_eq!(parse_game(PAYOFFS).unwrap(), prisoners_dilemma());
    }

    #[test]
    fn prefs_round_trip() {
        let g = prisoners_dilemma();
        let text = serialize_game(&g);
        assert!(text.contains("prefs P1 | P2=C2 : N1 > C1\n"), "{text}");
        assert_eq!(parse_game(&text).unwrap(), g);
        assert_eq!(serialize_game(&parse_game(&text).unwrap()), text);
    }

    #[test]
    fn one_player_game() {
        let g = parse_game("player P1 = x, y\nprefs P1 | : x > y\n").unwrap();
        assert_eq!(g.player_count(), 1);
        assert_eq!(g.order(0, &[]).ranking(), &[0, 1]);
        assert_eq!(serialize_game(&g), "player P1 = x, y\n\nprefs P1 | : x > y\n");
        assert_eq!(parse_game(&serialize_game(&g)).unwrap(), g);
    }

    #[test]
    fn tie_names_player_and_profile() {
        let text = "\
player P1 = a, b
player P2 = c, d
payoffs:
  (a, c) = 2, 2
  (a, d) = 1, 0
  (b, c) = 2, 5
  (b, d) = 0, 1
";
        let err = parse_game(text).unwrap_err();
        let d = &err.diagnostics()[0];
        assert_eq!(d.line, 3);
        assert!(d.message.contains("`P1`") && d.message.contains("P2=c"), "{}", d.message);
    }

    #[test]
    fn incomplete_payoffs() {
        let text = "player P1 = a, b\npayoffs:\n  (a) = 1\n";
        let err = parse_game(text).unwrap_err();
        assert_eq!(err.diagnostics()[0].line, 2);
        assert!(err.diagnostics()[0].message.contains("(b)"));
    }

    #[test]
    fn incomplete_prefs() {
        let text = "player P1 = a, b\nplayer P2 = c, d\nprefs P1 | P2=c : a > b\n";
        let err = parse_game(text).unwrap_err();
        let msgs: Vec<&str> = err.diagnostics().iter().map(|d| d.message.as_str()).collect();
        assert_eq!(msgs.len(), 3, "{msgs:?}");
    }

    #[test]
    fn mixing_forms_is_rejected() {
        let text = "player P1 = a, b\nprefs P1 | : a > b\npayoffs:\n  (a) = 1\n  (b) = 2\n";
        let err = parse_game(text).unwrap_err();
        assert_eq!(err.diagnostics()[0].line, 3);
    }

    #[test]
    fn grammar_errors_are_positioned() {
        let err = parse_game("player P1 = a, b\nprefs P1 | : a >> b\n").unwrap_err();
        assert_eq!((err.diagnostics()[0].line, err.diagnostics()[0].column), (2, 17));
        let err = parse_game("player P1 = a\npayoffs:\n  (a) = x\n").unwrap_err();
        assert_eq!((err.diagnostics()[0].line, err.diagnostics()[0].column), (3, 9));
        let err = parse_game("").unwrap_err();
        assert_eq!(err.diagnostics()[0].message, "no players declared");
    }
}
