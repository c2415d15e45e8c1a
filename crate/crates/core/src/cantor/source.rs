//! Deterministic, 1-based streams of values.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use rug::Rational as Q;
use thiserror::Error;

use crate::decimal::parse_decimal;
use crate::enumerate::{EnumConfig, EnumCursor, EnumError};
use crate::eval::Real;
use crate::expr::Tower;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// The deduplicated tower sequence.
    Towers,
    /// Positive rationals in Calkin-Wilf order, starting 1, 1/2, 2, 1/3, ...
    CalkinWilf,
    /// Rationals converging to 1 from both sides: 2/4, 6/4, 4/6, 8/6, ...
    Straddle,
    /// Values read from a file.
    File,
}

impl FromStr for SourceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "towers" => Ok(SourceKind::Towers),
            "calkin-wilf" => Ok(SourceKind::CalkinWilf),
            "straddle" => Ok(SourceKind::Straddle),
            "file" => Ok(SourceKind::File),
            _ => Err(format!(
                "unknown source {s:?} (expected towers, calkin-wilf, straddle or file)"
            )),
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceKind::Towers => "towers",
            SourceKind::CalkinWilf => "calkin-wilf",
            SourceKind::Straddle => "straddle",
            SourceKind::File => "file",
        })
    }
}

/// `(2+2n)/(4+2n)` and its reciprocal; the lower ends increase to 1 and
/// the upper ends decrease to 1.
pub fn straddle_pair(n: u64) -> (Q, Q) {
    let lo = Q::from((2 + 2 * n, 4 + 2 * n));
    let hi = Q::from((4 + 2 * n, 2 + 2 * n));
    (lo, hi)
}

/// Element `index` (1-based) of the straddle source: odd positions carry
/// `(2+2n)/(4+2n)`, even positions `(6+2n)/(4+2n)`.
pub fn straddle_element(index: usize) -> Q {
    let n = ((index - 1) / 2) as u64;
    if index % 2 == 1 {
        Q::from((2 + 2 * n, 4 + 2 * n))
    } else {
        Q::from((6 + 2 * n, 4 + 2 * n))
    }
}

/// Successor in Calkin-Wilf order: `1 / (2 floor(q) - q + 1)`.
pub fn calkin_wilf_next(q: &Q) -> Q {
    let fl = q.clone().floor();
    let d = Q::from(&fl * 2u32) - q + 1u32;
    d.recip()
}

enum Backing {
    Towers(Box<EnumCursor>),
    CalkinWilf,
    Straddle,
    File,
}

/// A source with its already produced values cached.
pub struct SequenceSource {
    kind: SourceKind,
    backing: Backing,
    cache: Vec<Real>,
    exhausted: bool,
}

impl SequenceSource {
    pub fn towers(config: EnumConfig) -> Self {
        Self::with(SourceKind::Towers, Backing::Towers(Box::new(EnumCursor::new(config))), Vec::new(), false)
    }

    pub fn calkin_wilf() -> Self {
        Self::with(SourceKind::CalkinWilf, Backing::CalkinWilf, Vec::new(), false)
    }

    pub fn straddle() -> Self {
        Self::with(SourceKind::Straddle, Backing::Straddle, Vec::new(), false)
    }

    /// A finite source; each line is a canonical expression or a decimal
    /// literal. Blank lines and lines starting with `#` are skipped.
    pub fn from_lines(text: &str) -> Result<Self, SourceError> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let value = if line.starts_with('(') {
                Real::Expr(Tower::parse(line).map_err(|e| SourceError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })?)
            } else {
                Real::Exact(parse_decimal(line).ok_or_else(|| SourceError::Parse {
                    line: i + 1,
                    message: format!("not an expression or decimal: {line:?}"),
                })?)
            };
            values.push(value);
        }
        Ok(Self::with(SourceKind::File, Backing::File, values, true))
    }

    pub fn from_file(path: &Path) -> Result<Self, SourceError> {
        Self::from_lines(&fs::read_to_string(path)?)
    }

    pub fn from_values(values: Vec<Real>) -> Self {
        Self::with(SourceKind::File, Backing::File, values, true)
    }

    fn with(kind: SourceKind, backing: Backing, cache: Vec<Real>, exhausted: bool) -> Self {
        SequenceSource {
            kind,
            backing,
            cache,
            exhausted,
        }
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    /// Element at 1-based `index`, or `None` past the end of a finite source.
    pub fn get(&mut self, index: usize) -> Result<Option<&Real>, SourceError> {
        assert!(index >= 1, "sources are 1-based");
        while self.cache.len() < index && !self.exhausted {
            let next = match &mut self.backing {
                Backing::Towers(cursor) => Real::Expr(cursor.next_entry()?.expr),
                Backing::CalkinWilf => Real::Exact(match self.cache.last() {
                    Some(Real::Exact(q)) => calkin_wilf_next(q),
                    _ => Q::from(1),
                }),
                Backing::Straddle => Real::Exact(straddle_element(self.cache.len() + 1)),
                Backing::File => {
                    self.exhausted = true;
                    break;
                }
            };
            self.cache.push(next);
        }
        Ok(self.cache.get(index - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take(src: &mut SequenceSource, n: usize) -> Vec<String> {
        (1..=n).map(|i| src.get(i).unwrap().unwrap().to_string()).collect()
    }

    #[test]
    fn calkin_wilf_opening() {
        let mut s = SequenceSource::calkin_wilf();
        assert_eq!(take(&mut s, 7), ["1", "1/2", "2", "1/3", "3/2", "2/3", "3"]);
    }

    #[test]
    fn straddle_opening() {
        let mut s = SequenceSource::straddle();
        assert_eq!(take(&mut s, 6), ["1/2", "3/2", "2/3", "4/3", "3/4", "5/4"]);
        let (lo, hi) = straddle_pair(0);
        assert_eq!((lo, hi), (Q::from((1, 2)), Q::from(2)));
    }

    #[test]
    fn towers_follow_the_enumeration() {
        let mut s = SequenceSource::towers(EnumConfig::default());
        assert_eq!(take(&mut s, 3), ["(1/1)", "(2/1)", "(1/2)"]);
    }

    #[test]
    fn file_source_is_finite() {
        let mut s = SequenceSource::from_lines("0.25\n\n(2/1)^(1/2)\n# note\n-3\n").unwrap();
        assert_eq!(take(&mut s, 3), ["1/4", "(2/1)^(1/2)", "-3"]);
        assert!(s.get(4).unwrap().is_none());
        assert!(SequenceSource::from_lines("x").is_err());
    }
}
