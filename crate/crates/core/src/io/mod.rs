//! Text formats, outcome syntax and the command-line driver.

mod cpnet_text;
mod game_text;
mod outcome_text;

pub mod cli;

use std::fmt;

use thiserror::Error;

pub use cpnet_text::{parse_cpnet, parse_cpnet_bytes, parse_cpnet_spec, parse_cpnet_with, serialize_cpnet};
pub use game_text::{parse_game, parse_game_bytes, serialize_game};
pub use outcome_text::{format_values, parse_assignment};

/// A message tied to a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Every diagnostic produced while reading a document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render(.0))]
pub struct ParseError(pub Vec<Diagnostic>);

fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

impl ParseError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.0
    }

    fn single(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError(vec![Diagnostic { line, column, message: message.into() }])
    }
}

/// Decodes UTF-8, reporting the position of the first invalid byte.
fn decode(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let good = &bytes[..e.valid_up_to()];
        let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = good.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
        let column = String::from_utf8_lossy(&good[line_start..]).chars().count() + 1;
        ParseError::single(line, column, "input is not valid UTF-8")
    })
}

/// Strips a `#` comment.
fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |p| &line[..p])
}

/// Character cursor over one line of input.
#[derive(Debug, Clone)]
struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, text, pos: 0 }
    }

    fn column_at(&self, pos: usize) -> usize {
        self.text[..pos].chars().count() + 1
    }

    fn column(&self) -> usize {
        self.column_at(self.pos)
    }

    fn error(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line: self.line, column: self.column(), message: message.into() }
    }

    fn error_at(&self, column: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line: self.line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Diagnostic> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}` before end of line")),
            })
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| !f(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    /// A `[A-Za-z0-9_]+` token and its column.
    fn word(&mut self, what: &str) -> Result<(&'a str, usize), Diagnostic> {
        self.skip_ws();
        let column = self.column();
        let w = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if w.is_empty() {
            return Err(match self.peek() {
                Some(found) => self.error(format!("expected {what}, found `{found}`")),
                None => self.error(format!("expected {what} before end of line")),
            });
        }
        Ok((w, column))
    }

    /// A decimal number and its column.
    fn number(&mut self) -> Result<(f64, usize), Diagnostic> {
        self.skip_ws();
        let column = self.column();
        let token = self.take_while(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-'));
        let value: f64 = token
            .parse()
            .map_err(|_| self.error_at(column, format!("expected a number, found `{token}`")))?;
        if !value.is_finite() {
            return Err(self.error_at(column, format!("payoff `{token}` is not finite")));
        }
        Ok((value, column))
    }

    fn expect_end(&mut self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }
}

/// `<word> (, <word>)*`, possibly empty when `allow_empty`.
fn word_list<'a>(cur: &mut Cursor<'a>, what: &str, allow_empty: bool) -> Result<Vec<(&'a str, usize)>, Diagnostic> {
    let mut out = Vec::new();
    if cur.at_end() && allow_empty {
        return Ok(out);
    }
    loop {
        out.push(cur.word(what)?);
        if !cur.eat(',') {
            return Ok(out);
        }
    }
}
