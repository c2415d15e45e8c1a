//! The printed opening of the sequence, kept as golden data.

use serde::Serialize;

use super::cursor::{EnumConfig, EnumCursor, EnumError};

const GOLDEN: &str = include_str!("../../data/golden_prefix.txt");

/// Canonical strings of the printed prefix, in order.
pub fn golden_prefix() -> Vec<String> {
    GOLDEN
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    /// 1-based.
    pub index: usize,
    pub expected: String,
    pub found: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    pub matched: usize,
    pub total: usize,
    pub first_divergence: Option<Divergence>,
    /// Every position where the streams differ.
    pub diff: Vec<Divergence>,
}

impl PrefixReport {
    pub fn is_match(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Element-by-element comparison of a generated stream with a reference.
pub fn compare_streams(generated: &[String], reference: &[String]) -> PrefixReport {
    let diff: Vec<Divergence> = reference
        .iter()
        .enumerate()
        .filter_map(|(i, expected)| {
            let found = generated.get(i);
            (found != Some(expected)).then(|| Divergence {
                index: i + 1,
                expected: expected.clone(),
                found: found.cloned(),
            })
        })
        .collect();
    PrefixReport {
        matched: reference.len() - diff.len(),
        total: reference.len(),
        first_divergence: diff.first().cloned(),
        diff,
    }
}

pub fn verify_prefix(reference: &[String], config: EnumConfig) -> Result<PrefixReport, EnumError> {
    assert!(!reference.is_empty(), "reference must be nonempty");
    let generated = EnumCursor::new(config)
        .take(reference.len())
        .map(|e| e.map(|e| e.expr.render()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(compare_streams(&generated, reference))
}
