//! Outcome syntax for the command line.

use crate::error::{Error, Result};
use crate::model::{CpNet, Outcome};

/// Parses `A=a B=bbar, C=c ...`: pairs separated by spaces or commas, in any
/// order, naming every variable exactly once. A list without any `=` is read
/// positionally, one value per variable in index order.
pub fn parse_assignment(net: &CpNet, text: &str) -> Result<Outcome> {
    let tokens: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
    if !tokens.iter().any(|t| t.contains('=')) {
        return net.outcome_from_names(&tokens);
    }
    let mut values: Vec<Option<usize>> = vec![None; net.len()];
    for token in tokens {
        let Some((name, value)) = token.split_once('=') else {
            return Err(Error::Malformed(format!("expected `Var=value`, found `{token}`")));
        };
        let x = net.var_by_name(name)?;
        if values[x.index()].is_some() {
            return Err(Error::Malformed(format!("variable `{name}` assigned twice")));
        }
        values[x.index()] = Some(net.value_by_name(x, value)?);
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Malformed(format!("no value given for `{}`", net.variables()[i].name))))
        .collect::<Result<Vec<_>>>()
        .map(Outcome)
}

/// Value names separated by single spaces, in variable order.
pub fn format_values(net: &CpNet, o: &Outcome) -> String {
    net.outcome_names(o).join(" ")
}
