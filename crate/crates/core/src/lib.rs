//! Weight-ordered enumeration of rational power towers, rigorous ball
//! evaluation, and executable nested-interval and diagonal constructions
//! over pluggable sequences.

pub mod approx;
pub mod cantor;
pub mod decimal;
pub mod enumerate;
pub mod eval;
pub mod expr;

pub use enumerate::{EnumConfig, EnumCursor, SequenceEntry};
pub use eval::{PrecisionPolicy, Real, RealBall, ValueClass, ValueOrdering};
pub use expr::{Atom, Rational, Tower};
