//! The line-oriented CP-net format.
//!
//! ```text
//! # comments run to the end of the line
//! domain A = a, abar
//! domain B = b, bbar
//! parents B = A            # `parents B = [A]` and `parents B =` also accepted
//! cpt A:
//!   : a > abar             # a parentless variable has one bare row
//! cpt B:
//!   [A=a] : b > bbar
//!   [A=abar] : bbar > b
//! ```
//!
//! Declarations may come in any order; variables are numbered by the order
//! of their `domain` lines. Rows may list parent assignments in any order.

use std::collections::HashMap;

use super::{decode, strip_comment, word_list, Cursor, Diagnostic, ParseError};
use crate::model::{CpNet, Limits, NetSpec, RowSpec, VarId, VariableSpec, ViolationKind};

type Tok<'a> = (&'a str, usize);

struct DomainDecl<'a> {
    line: usize,
    name: Tok<'a>,
    values: Vec<Tok<'a>>,
}

struct ParentsDecl<'a> {
    line: usize,
    var: Tok<'a>,
    parents: Vec<Tok<'a>>,
}

struct RowDecl<'a> {
    line: usize,
    column: usize,
    key: Vec<(Tok<'a>, Tok<'a>)>,
    order: Vec<Tok<'a>>,
}

struct CptBlock<'a> {
    line: usize,
    var: Tok<'a>,
    rows: Vec<RowDecl<'a>>,
}

#[derive(Default)]
struct Document<'a> {
    domains: Vec<DomainDecl<'a>>,
    parents: Vec<ParentsDecl<'a>>,
    cpts: Vec<CptBlock<'a>>,
}

/// Where each part of the resolved spec came from.
#[derive(Default)]
struct SourceMap {
    domain_line: Vec<usize>,
    parents_line: Vec<Option<usize>>,
    cpt_line: Vec<Option<usize>>,
    row_lines: Vec<Vec<usize>>,
}

fn parse_row<'a>(cur: &mut Cursor<'a>) -> Result<RowDecl<'a>, Diagnostic> {
    let column = cur.column();
    let mut key = Vec::new();
    if cur.eat('[') && !cur.eat(']') {
        loop {
            let parent = cur.word("a parent name")?;
            cur.expect('=')?;
            let value = cur.word("a parent value")?;
            key.push((parent, value));
            if !cur.eat(',') {
                cur.expect(']')?;
                break;
            }
        }
    }
    cur.expect(':')?;
    let mut order = vec![cur.word("a value")?];
    while cur.eat('>') {
        order.push(cur.word("a value")?);
    }
    cur.expect_end()?;
    Ok(RowDecl { line: cur.line, column, key, order })
}

fn parse_document(text: &str) -> (Document<'_>, Vec<Diagnostic>) {
    let mut doc = Document::default();
    let mut errors = Vec::new();
    let mut in_cpt = false;
    for (i, raw) in text.split('\n').enumerate() {
        let mut cur = Cursor::new(i + 1, strip_comment(raw.strip_suffix('\r').unwrap_or(raw)));
        if cur.at_end() {
            continue;
        }
        if matches!(cur.peek(), Some('[') | Some(':')) {
            if !in_cpt {
                errors.push(cur.error("row outside of a `cpt` block"));
                continue;
            }
            match parse_row(&mut cur) {
                Ok(row) => doc.cpts.last_mut().expect("in a block").rows.push(row),
                Err(e) => errors.push(e),
            }
            continue;
        }
        let line = cur.line;
        let result = (|| -> Result<(), Diagnostic> {
            let (keyword, column) = cur.word("`domain`, `parents` or `cpt`")?;
            match keyword {
                "domain" => {
                    in_cpt = false;
                    let name = cur.word("a variable name")?;
                    cur.expect('=')?;
                    let values = word_list(&mut cur, "a value", false)?;
                    cur.expect_end()?;
                    doc.domains.push(DomainDecl { line, name, values });
                }
                "parents" => {
                    in_cpt = false;
                    let var = cur.word("a variable name")?;
                    cur.expect('=')?;
                    let bracketed = cur.eat('[');
                    let parents = if bracketed && cur.peek() == Some(']') {
                        Vec::new()
                    } else {
                        word_list(&mut cur, "a parent name", !bracketed)?
                    };
                    if bracketed {
                        cur.expect(']')?;
                    }
                    cur.expect_end()?;
                    doc.parents.push(ParentsDecl { line, var, parents });
                }
                "cpt" => {
                    let var = cur.word("a variable name")?;
                    cur.expect(':')?;
                    cur.expect_end()?;
                    doc.cpts.push(CptBlock { line, var, rows: Vec::new() });
                    in_cpt = true;
                }
                other => {
                    in_cpt = false;
                    return Err(cur.error_at(column, format!("unknown declaration `{other}`")));
                }
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

fn resolve(doc: &Document<'_>, errors: &mut Vec<Diagnostic>) -> (NetSpec, SourceMap) {
    let mut spec = NetSpec::default();
    let mut map = SourceMap::default();
    let mut index: HashMap<&str, usize> = HashMap::new();

    for d in &doc.domains {
        if index.contains_key(d.name.0) {
            errors.push(diag(d.line, d.name.1, format!("variable `{}` declared twice", d.name.0)));
            continue;
        }
        index.insert(d.name.0, spec.variables.len());
        spec.variables.push(VariableSpec {
            name: d.name.0.to_string(),
            values: d.values.iter().map(|v| v.0.to_string()).collect(),
            parents: Vec::new(),
            rows: Vec::new(),
        });
        map.domain_line.push(d.line);
    }
    let n = spec.variables.len();
    map.parents_line = vec![None; n];
    map.cpt_line = vec![None; n];
    map.row_lines = vec![Vec::new(); n];

    for p in &doc.parents {
        let Some(&x) = index.get(p.var.0) else {
            errors.push(diag(p.line, p.var.1, format!("`parents` for undeclared variable `{}`", p.var.0)));
            continue;
        };
        if map.parents_line[x].is_some() {
            errors.push(diag(p.line, p.var.1, format!("parents of `{}` declared twice", p.var.0)));
            continue;
        }
        map.parents_line[x] = Some(p.line);
        for &(name, column) in &p.parents {
            match index.get(name) {
                Some(&q) => spec.variables[x].parents.push(q),
                None => errors.push(diag(p.line, column, format!("undeclared parent `{name}`"))),
            }
        }
    }

    for block in &doc.cpts {
        let Some(&x) = index.get(block.var.0) else {
            errors.push(diag(block.line, block.var.1, format!("`cpt` for undeclared variable `{}`", block.var.0)));
            continue;
        };
        if map.cpt_line[x].is_some() {
            errors.push(diag(block.line, block.var.1, format!("`cpt` block for `{}` declared twice", block.var.0)));
            continue;
        }
        map.cpt_line[x] = Some(block.line);
        'rows: for row in &block.rows {
            let parents = spec.variables[x].parents.clone();
            let mut key: Vec<Option<usize>> = vec![None; parents.len()];
            for &((pname, pcol), (value, vcol)) in &row.key {
                let slot = index.get(pname).and_then(|q| parents.iter().position(|p| p == q));
                let Some(k) = slot else {
                    errors.push(diag(row.line, pcol, format!("`{pname}` is not a parent of `{}`", block.var.0)));
                    continue 'rows;
                };
                if key[k].is_some() {
                    errors.push(diag(row.line, pcol, format!("parent `{pname}` assigned twice")));
                    continue 'rows;
                }
                match spec.variables[parents[k]].values.iter().position(|v| v == value) {
                    Some(v) => key[k] = Some(v),
                    None => {
                        errors.push(diag(row.line, vcol, format!("`{value}` is not a value of `{pname}`")));
                        continue 'rows;
                    }
                }
            }
            if let Some(k) = key.iter().position(Option::is_none) {
                let missing = &spec.variables[parents[k]].name;
                errors.push(diag(row.line, row.column, format!("row does not assign parent `{missing}`")));
                continue;
            }
            let mut ranking = Vec::with_capacity(row.order.len());
            for &(value, column) in &row.order {
                match spec.variables[x].values.iter().position(|v| v == value) {
                    Some(v) => ranking.push(v),
                    None => {
                        errors.push(diag(row.line, column, format!("`{value}` is not a value of `{}`", block.var.0)));
                        continue 'rows;
                    }
                }
            }
            spec.variables[x].rows.push(RowSpec { key: key.into_iter().map(|k| k.expect("checked")).collect(), ranking });
            map.row_lines[x].push(row.line);
        }
    }
    (spec, map)
}

fn parse_spec_mapped(text: &str) -> Result<(NetSpec, SourceMap), ParseError> {
    let (doc, mut errors) = parse_document(text);
    if doc.domains.is_empty() && errors.is_empty() {
        return Err(ParseError::single(1, 1, "no variables declared"));
    }
    let (spec, map) = resolve(&doc, &mut errors);
    if errors.is_empty() {
        Ok((spec, map))
    } else {
        errors.sort_by_key(|d| (d.line, d.column));
        Err(ParseError(errors))
    }
}

/// Parses and resolves names without checking table invariants.
pub fn parse_cpnet_spec(text: &str) -> Result<NetSpec, ParseError> {
    parse_spec_mapped(text).map(|(spec, _)| spec)
}

pub fn parse_cpnet(text: &str) -> Result<CpNet, ParseError> {
    parse_cpnet_with(text, &Limits::default())
}

pub fn parse_cpnet_with(text: &str, limits: &Limits) -> Result<CpNet, ParseError> {
    let (spec, map) = parse_spec_mapped(text)?;
    let report = spec.validate_with(limits);
    if !report.is_empty() {
        let mut diags: Vec<Diagnostic> = report
            .iter()
            .map(|v| {
                let x = v.variable.unwrap_or(0);
                let line = match (v.row, v.kind) {
                    (Some(r), _) => map.row_lines[x][r],
                    (None, ViolationKind::BadParent | ViolationKind::TableTooLarge) => {
                        map.parents_line[x].unwrap_or(map.domain_line[x])
                    }
                    (None, ViolationKind::MissingRow) => map.cpt_line[x].unwrap_or(map.domain_line[x]),
                    _ => map.domain_line.get(x).copied().unwrap_or(1),
                };
                Diagnostic { line, column: 1, message: v.to_string() }
            })
            .collect();
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(ParseError(diags));
    }
    Ok(spec.build_with(limits).expect("validated"))
}

pub fn parse_cpnet_bytes(bytes: &[u8]) -> Result<CpNet, ParseError> {
    parse_cpnet(decode(bytes)?)
}

/// Canonical text: all `domain` lines, then `parents` lines for variables
/// that have parents, then one `cpt` block per variable with rows in key
/// order. Parent lists are sorted by variable index.
pub fn serialize_cpnet(net: &CpNet) -> String {
    let mut out = String::new();
    for v in net.variables() {
        out.push_str(&format!("domain {} = {}\n", v.name, v.domain.values().join(", ")));
    }
    let with_parents: Vec<VarId> = net.var_ids().filter(|&x| !net.parents(x).is_empty()).collect();
    if !with_parents.is_empty() {
        out.push('\n');
        for x in with_parents {
            let names: Vec<&str> = net.parents(x).iter().map(|&p| net.name(p)).collect();
            out.push_str(&format!("parents {} = {}\n", net.name(x), names.join(", ")));
        }
    }
    for x in net.var_ids() {
        out.push_str(&format!("\ncpt {}:\n", net.name(x)));
        let table = net.table(x);
        for (key, row) in table.entries() {
            out.push_str("  ");
            if !key.is_empty() {
                let parts: Vec<String> = table
                    .parents()
                    .iter()
                    .zip(&key)
                    .map(|(&p, &v)| format!("{}={}", net.name(p), net.value_name(p, v)))
                    .collect();
                out.push_str(&format!("[{}] ", parts.join(", ")));
            }
            let order: Vec<&str> = row.ranking().iter().map(|&v| net.value_name(x, v)).collect();
            out.push_str(&format!(": {}\n", order.join(" > ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testnets;

    const CYCLIC: &str = "\
domain A = a, abar
domain B = b, bbar
domain C = c, cbar
domain D = d, dbar
parents A = D
parents B = [A]
parents C = B
parents D = C
cpt A:
  [D=d]: a > abar
  [D=dbar]: a > abar
cpt B:
  [A=a]: b > bbar
  [A=abar]: bbar > b
cpt C:
  [B=b]: c > cbar
  [B=bbar]: cbar > c
cpt D:
  [C=c]: d > dbar
  [C=cbar]: dbar > d
";

    #[test]
    fn parses_the_cyclic_net() {
        assert_eq!(parse_cpnet(CYCLIC).unwrap(), testnets::cyclic4());
    }

    #[test]
    fn empty_input() {
        let err = parse_cpnet("  # only a comment\n\n").unwrap_err();
        assert_eq!(err.diagnostics()[0].message, "no variables declared");
    }

    #[test]
    fn round_trip_is_canonical() {
        let net = testnets::acyclic4();
        let text = serialize_cpnet(&net);
        assert_eq!(parse_cpnet(&text).unwrap(), net);
        assert_eq!(serialize_cpnet(&parse_cpnet(&text).unwrap()), text);
        assert!(text.contains("  : a > abar\n"));
        assert!(text.contains("parents C = A, B\n"));
    }

    #[test]
    fn row_and_key_order_do_not_matter() {
        let shuffled = "\
cpt C:
  [B=bbar, A=abar]: c > cbar
  [A=a, B=b] : c > cbar
  [B=b, A=abar]: cbar > c
  [A=a, B=bbar]: cbar > c
cpt D:
  [C=cbar]: dbar > d
  [C=c]: d > dbar
cpt A:
  : a > abar
cpt B:
  []: b > bbar
parents D = C
parents C = B, A
domain A = a, abar
domain B = b, bbar
domain C = c, cbar
domain D = d, dbar
";
        let net = parse_cpnet(shuffled).unwrap();
        assert_eq!(serialize_cpnet(&net), serialize_cpnet(&testnets::acyclic4()));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let err = parse_cpnet("domain A = a, b\ncpt A:\n  : a >\n").unwrap_err();
        let d = &err.diagnostics()[0];
        assert_eq!((d.line, d.column), (3, 8));

        let err = parse_cpnet("domain A = a b\n").unwrap_err();
        assert_eq!(err.diagnostics()[0].line, 1);
        assert_eq!(err.diagnostics()[0].column, 14);

        let err = parse_cpnet("domian A = a\n").unwrap_err();
        assert!(err.diagnostics()[0].message.contains("unknown declaration"));

        let err = parse_cpnet("domain A = a, b\n: a > b\n").unwrap_err();
        assert!(err.diagnostics()[0].message.contains("outside"));
    }

    #[test]
    fn resolution_errors_are_collected() {
        let text = "\
domain A = a, b
domain A = x
parents A = Q
parents Z = A
cpt A:
  [Q=1] : a > c
";
        let err = parse_cpnet(text).unwrap_err();
        let lines: Vec<usize> = err.diagnostics().iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 6]);
    }

    #[test]
    fn validation_violations_carry_lines() {
        let text = "\
domain A = a, abar
domain D = d, dbar
parents A = D
cpt A:
  [D=d]: a > abar
  [D=d]: abar > a
cpt D:
  : d > d
";
        let err = parse_cpnet(text).unwrap_err();
        let got: Vec<(usize, bool)> = err
            .diagnostics()
            .iter()
            .map(|d| (d.line, d.message.starts_with("duplicate-row") || d.message.starts_with("missing-row") || d.message.starts_with("non-permutation")))
            .collect();
        assert_eq!(got, vec![(4, true), (6, true), (8, true)]);
    }

    #[test]
    fn invalid_utf8_is_positioned() {
        let bytes = b"domain A = a, b\ndomain B = \xff\n";
        let err = parse_cpnet_bytes(bytes).unwrap_err();
        assert_eq!((err.diagnostics()[0].line, err.diagnostics()[0].column), (2, 12));
    }

    #[test]
    fn missing_table_is_a_missing_row() {
        let err = parse_cpnet("domain A = a, b\n").unwrap_err();
        assert!(err.diagnostics()[0].message.starts_with("missing-row"));
    }

    #[test]
    fn reduced_net_has_bare_row() {
        let r = crate::reduction::reduce(&testnets::redundant3());
        let text = serialize_cpnet(&r);
        assert!(text.ends_with("cpt Z:\n  : c2 > c1\n"), "{text}");
        assert_eq!(parse_cpnet(&text).unwrap(), r);
    }
}
