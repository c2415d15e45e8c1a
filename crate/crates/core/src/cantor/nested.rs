//! Nested intervals: inside the current interval take the first two
//! elements of the sequence not yet scanned, smaller one as the new lower end.

use serde::Serialize;

use super::source::SequenceSource;
use super::HarnessError;
use crate::eval::{compare_values, PrecisionPolicy, Real, ValueOrdering};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedLevel {
    pub alpha: Real,
    pub alpha_index: usize,
    pub beta: Real,
    pub beta_index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    DepthReached,
    /// Fewer than two elements inside the interval within the scan budget.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedTrace {
    /// `levels[ν]` is the interval `(α^(ν), β^(ν))`, counting from 0.
    pub levels: Vec<NestedLevel>,
    /// Source positions consumed in total.
    pub scanned: usize,
    pub termination: Termination,
}

impl NestedTrace {
    /// The last interval, where any limit point must lie.
    pub fn final_interval(&self) -> Option<&NestedLevel> {
        self.levels.last()
    }
}

fn cmp(a: &Real, b: &Real, policy: &PrecisionPolicy) -> Result<ValueOrdering, HarnessError> {
    match compare_values(a, b, policy) {
        ValueOrdering::Indistinguishable => Err(HarnessError::Undecidable {
            left: a.to_string(),
            right: b.to_string(),
        }),
        o => Ok(o),
    }
}

/// Runs the construction for up to `depth` levels, examining at most
/// `scan_budget` source elements per level. Scanning resumes after the
/// later of the two elements picked for the previous level.
pub fn nested_intervals(
    src: &mut SequenceSource,
    alpha: Real,
    beta: Real,
    depth: usize,
    scan_budget: usize,
    policy: &PrecisionPolicy,
) -> Result<NestedTrace, HarnessError> {
    if depth == 0 {
        return Err(HarnessError::InvalidInput("depth must be at least 1".into()));
    }
    if cmp(&alpha, &beta, policy)? != ValueOrdering::Less {
        return Err(HarnessError::InvalidInput(format!(
            "lower end {alpha} is not below upper end {beta}"
        )));
    }
    let (mut lo, mut hi) = (alpha, beta);
    let mut next = 1usize;
    let mut levels = Vec::new();
    let mut termination = Termination::DepthReached;
    'levels: for _ in 0..depth {
        let mut picked: Vec<(usize, Real)> = Vec::with_capacity(2);
        let mut scanned = 0;
        while picked.len() < 2 {
            if scanned == scan_budget {
                termination = Termination::BudgetExhausted;
                break 'levels;
            }
            let Some(v) = src.get(next)?.cloned() else {
                termination = Termination::BudgetExhausted;
                break 'levels;
            };
            let index = next;
            next += 1;
            scanned += 1;
            let inside = cmp(&lo, &v, policy)? == ValueOrdering::Less
                && cmp(&v, &hi, policy)? == ValueOrdering::Less;
            if !inside {
                continue;
            }
            // a value equal to the first pick is passed over; the earlier index wins
            if let Some((_, first)) = picked.first() {
                if cmp(first, &v, policy)? == ValueOrdering::EqualExact {
                    continue;
                }
            }
            picked.push((index, v));
        }
        let (i, x) = picked.remove(0);
        let (j, y) = picked.remove(0);
        let level = if cmp(&x, &y, policy)? == ValueOrdering::Less {
            NestedLevel {
                alpha: x,
                alpha_index: i,
                beta: y,
                beta_index: j,
            }
        } else {
            NestedLevel {
                alpha: y,
                alpha_index: j,
                beta: x,
                beta_index: i,
            }
        };
        lo = level.alpha.clone();
        hi = level.beta.clone();
        levels.push(level);
    }
    Ok(NestedTrace {
        levels,
        scanned: next - 1,
        termination,
    })
}

/// 1-based position of the first element equal to `value`, looking at no
/// more than `budget` elements.
pub fn index_of_value(
    src: &mut SequenceSource,
    value: &Real,
    budget: usize,
    policy: &PrecisionPolicy,
) -> Result<Option<usize>, HarnessError> {
    for i in 1..=budget {
        let Some(v) = src.get(i)?.cloned() else {
            return Ok(None);
        };
        if compare_values(&v, value, policy) == ValueOrdering::EqualExact {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
