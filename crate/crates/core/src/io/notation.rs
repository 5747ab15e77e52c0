//! Cycle notation: rows separated by `;`, each row a product of
//! parenthesised cycles with 1-based positions, e.g. `(2 3);(1 2)`.
//! Positions inside a cycle may be separated by spaces or commas, or written
//! as bare digits (`(123)`) when every position is a single digit. Positions
//! that appear in no cycle are fixed; `()` or an empty row is the identity.

use crate::error::{Error, Result};
use crate::permnet::{Perm, PermTuple, TraceMonomial};

fn parse_cycle(body: &str, l: usize) -> Result<Vec<usize>> {
    let body = body.trim();
    let tokens: Vec<&str> = if body.contains([' ', ',', '\t']) {
        body.split([' ', ',', '\t']).filter(|t| !t.is_empty()).collect()
    } else {
        body.split_inclusive(|_| true).collect()
    };
    tokens
        .iter()
        .map(|t| {
            let p: usize = t.parse().map_err(|_| Error::parse(format!("bad position {t:?} in cycle ({body})")))?;
            if p == 0 || p > l {
                return Err(Error::parse(format!("position {p} outside 1..={l}")));
            }
            Ok(p - 1)
        })
        .collect()
}

fn parse_row(row: &str, l: usize) -> Result<Perm> {
    let mut cycles = Vec::new();
    let mut rest = row.trim();
    while !rest.is_empty() {
        let Some(after) = rest.strip_prefix('(') else {
            return Err(Error::parse(format!("expected '(' in {row:?}")));
        };
        let Some(close) = after.find(')') else {
            return Err(Error::parse(format!("unclosed cycle in {row:?}")));
        };
        let body = &after[..close];
        if body.contains('(') {
            return Err(Error::parse(format!("nested '(' in {row:?}")));
        }
        if !body.trim().is_empty() {
            cycles.push(parse_cycle(body, l)?);
        }
        rest = after[close + 1..].trim_start();
    }
    Perm::from_cycles(l, &cycles).map_err(|e| Error::parse(format!("{row:?}: {e}")))
}

/// Parses `n`-row cycle notation for permutations of `l` boxes.
pub fn parse_perm_tuple(s: &str, l: usize) -> Result<PermTuple> {
    let rows = s.split(';').map(|r| parse_row(r, l)).collect::<Result<Vec<_>>>()?;
    PermTuple::new(rows)
}

/// Parses a comma-separated list of 1-based operator labels into 0-based
/// indices.
pub fn parse_labels(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<usize>() {
                Ok(p) if p >= 1 => Ok(p - 1),
                _ => Err(Error::parse(format!("bad label {t:?}; labels are positive integers"))),
            }
        })
        .collect()
}

pub fn format_labels(labels: &[usize]) -> String {
    labels.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Builds a monomial from cycle notation and a label list; the number of
/// boxes is the length of the label list.
pub fn parse_monomial(perm: &str, labels: &str) -> Result<TraceMonomial> {
    let labels = parse_labels(labels)?;
    let sigma = parse_perm_tuple(perm, labels.len())?;
    TraceMonomial::new(labels, sigma)
}
