//! Line-oriented text format for arc systems.
//!
//! ```text
//! bridge-arc-system v1
//! system epsilon
//! arc 1 1 2 U
//! events 1 :
//! arc 2 3 4 U
//! events 2 :
//! arc 3 5 6 U
//! events 3 :
//! end
//! ```
//!
//! `arc <k> <start> <end> <U|L>` gives the arc's endpoints and the hemisphere
//! of its first chord; the following `events <k> :` line lists its equator
//! crossings as `<segment>@<rank>` tokens in order along the arc. Text after
//! `#` is a comment; blank lines are ignored.

use std::fs;
use std::path::Path;

use crate::sphere::{validate_system, ArcSystem, Hemisphere, RawArc, RawSystem, ValidationError};

pub const HEADER: &str = "bridge-arc-system v1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl FormatError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError::Parse { line, column, message: message.into() }
    }
}

/// A whitespace-separated token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], column: line[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: line[..s].chars().count() + 1 });
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

fn number<T: std::str::FromStr>(tok: &Token<'_>, line: usize, what: &str) -> Result<T, FormatError> {
    tok.text
        .parse()
        .map_err(|_| FormatError::at(line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

/// Parses the text format without checking the geometric invariants.
pub fn parse_raw(text: &str) -> Result<RawSystem, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let eof = |what: &str| FormatError::at(text.lines().count() + 1, 1, format!("unexpected end of input, expected {what}"));

    let (n, header) = lines.next().ok_or_else(|| eof("header"))?;
    if header.trim() != HEADER {
        return Err(FormatError::at(n, 1, format!("expected `{HEADER}`")));
    }
    let (n, sys_line) = lines.next().ok_or_else(|| eof("`system <name>`"))?;
    let trimmed = sys_line.trim_start();
    let name = trimmed
        .strip_prefix("system")
        .filter(|rest| rest.starts_with(char::is_whitespace))
        .map(str::trim)
        .filter(|rest| !rest.is_empty())
        .ok_or_else(|| FormatError::at(n, sys_line.len() - trimmed.len() + 1, "expected `system <name>`"))?;

    let mut arcs = Vec::new();
    loop {
        let (n, line) = lines.next().ok_or_else(|| eof("`arc` or `end`"))?;
        let toks = tokens(line);
        match toks[0].text {
            "end" => {
                if let Some(extra) = toks.get(1) {
                    return Err(FormatError::at(n, extra.column, "unexpected token after `end`"));
                }
                break;
            }
            "arc" => {}
            other => return Err(FormatError::at(n, toks[0].column, format!("expected `arc` or `end`, found `{other}`"))),
        }
        if toks.len() != 5 {
            let col = toks.get(5).map_or(line.trim_end().chars().count() + 1, |t| t.column);
            return Err(FormatError::at(n, col, "expected `arc <k> <start> <end> <U|L>`"));
        }
        let k: usize = number(&toks[1], n, "arc index")?;
        if k != arcs.len() + 1 {
            return Err(FormatError::at(n, toks[1].column, format!("expected arc index {}", arcs.len() + 1)));
        }
        let start: u8 = number(&toks[2], n, "puncture label")?;
        let end: u8 = number(&toks[3], n, "puncture label")?;
        let start_side = Hemisphere::from_symbol(toks[4].text)
            .ok_or_else(|| FormatError::at(n, toks[4].column, "expected `U` or `L`"))?;

        let (n, line) = lines.next().ok_or_else(|| eof("`events` line"))?;
        let toks = tokens(line);
        if toks[0].text != "events" {
            return Err(FormatError::at(n, toks[0].column, "expected `events <k> :`"));
        }
        let kk = toks.get(1).ok_or_else(|| FormatError::at(n, line.trim_end().chars().count() + 1, "expected arc index"))?;
        if number::<usize>(kk, n, "arc index")? != k {
            return Err(FormatError::at(n, kk.column, format!("expected arc index {k}")));
        }
        match toks.get(2) {
            Some(t) if t.text == ":" => {}
            Some(t) => return Err(FormatError::at(n, t.column, "expected `:`")),
            None => return Err(FormatError::at(n, line.trim_end().chars().count() + 1, "expected `:`")),
        }
        let mut events = Vec::new();
        for t in &toks[3..] {
            let (seg, rank) = t
                .text
                .split_once('@')
                .ok_or_else(|| FormatError::at(n, t.column, format!("expected `<segment>@<rank>`, found `{}`", t.text)))?;
            let bad = || FormatError::at(n, t.column, format!("expected `<segment>@<rank>`, found `{}`", t.text));
            let seg: u8 = seg.parse().map_err(|_| bad())?;
            let rank: u32 = rank.parse().map_err(|_| bad())?;
            events.push((seg, rank));
        }
        arcs.push(RawArc { start, end, start_side, events, end_side: None });
    }
    if let Some((n, line)) = lines.next() {
        let col = line.len() - line.trim_start().len() + 1;
        return Err(FormatError::at(n, col, "unexpected content after `end`"));
    }
    Ok(RawSystem { name: name.to_string(), arcs })
}

/// Parses and validates a system.
pub fn parse_system(text: &str) -> Result<ArcSystem, FormatError> {
    Ok(validate_system(&parse_raw(text)?)?)
}

/// Serializes a system; `parse_system(&to_text(s))` reproduces `s`.
pub fn to_text(sys: &ArcSystem) -> String {
    let mut out = format!("{HEADER}\nsystem {}\n", sys.name);
    for (i, arc) in sys.arcs().iter().enumerate() {
        let k = i + 1;
        out.push_str(&format!("arc {k} {} {} {}\n", arc.start.label(), arc.end.label(), arc.start_side.symbol()));
        out.push_str(&format!("events {k} :"));
        for e in &arc.events {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn load_system(path: &Path) -> Result<ArcSystem, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    parse_system(&text)
}

pub fn save_system(sys: &ArcSystem, path: &Path) -> Result<(), FormatError> {
    fs::write(path, to_text(sys)).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}
