//! Executable nested-interval and diagonal constructions over pluggable
//! sequences. They compute the constructions and what can be measured
//! about them; they make no claim about what the constructions prove.

mod diagonal;
mod nested;
mod source;

use thiserror::Error;

pub use diagonal::{diagonal, difference_profile, DiagonalResult, DiagonalRow, DigitRule, ProfileRow};
pub use nested::{index_of_value, nested_intervals, NestedLevel, NestedTrace, Termination};
pub use source::{
    calkin_wilf_next, straddle_element, straddle_pair, SequenceSource, SourceError, SourceKind,
};

use crate::eval::EvalError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cannot order {left} and {right} within the precision cap")]
    Undecidable { left: String, right: String },
    #[error("element {index}: {source}")]
    Digit { index: usize, source: EvalError },
    #[error("source has {found} elements, {needed} needed")]
    SourceTooShort { needed: usize, found: usize },
    #[error(transparent)]
    Source(#[from] SourceError),
}
