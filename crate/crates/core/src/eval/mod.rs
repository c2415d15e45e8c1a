//! Rigorous evaluation: exact forms where they exist, MPFR intervals
//! with directed rounding everywhere else.

mod ball;
pub mod closed;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::{MulAssignRound, Pow};
use rug::{Float, Integer, Rational as Q};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ball::{atom_interval, tower_interval, Interval, RealBall};
pub use closed::{tower_closed, Closed, Radical};

use crate::decimal;
use crate::expr::Tower;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("tolerance not met within {cap_digits} digits")]
    PrecisionCapExceeded { cap_digits: u32 },
    #[error("digit {position} undecidable within {cap_digits} digits")]
    DigitUndecidable { position: usize, cap_digits: u32 },
    /// Past the floating-point exponent range, exact or not.
    #[error("value exceeds the representable range")]
    OutOfRange,
}

/// Working precision: start at `start_digits`, double until `cap_digits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_digits: u32,
    pub cap_digits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_digits: 64,
            cap_digits: 4096,
        }
    }
}

impl PrecisionPolicy {
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut d = self.start_digits.clamp(1, self.cap_digits.max(1));
        loop {
            out.push(d);
            if d >= self.cap_digits {
                return out;
            }
            d = d.saturating_mul(2).min(self.cap_digits);
        }
    }

    pub fn bits(digits: u32) -> u32 {
        (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }
}

/// Positive absolute tolerance, e.g. `1e-50`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tolerance(Q);

impl Tolerance {
    pub fn new(q: Q) -> Option<Self> {
        (q > 0).then_some(Tolerance(q))
    }

    pub fn pow10(n: u32) -> Self {
        Tolerance(Q::from((1, Integer::from(10).pow(n))))
    }

    pub fn value(&self) -> &Q {
        &self.0
    }
}

impl FromStr for Tolerance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        decimal::parse_decimal(s)
            .and_then(Tolerance::new)
            .ok_or_else(|| format!("invalid tolerance {s:?}: expected a positive decimal such as 1e-50"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValueClass {
    Exact(Q),
    Irrational(RealBall),
}

impl ValueClass {
    pub fn is_exact(&self) -> bool {
        matches!(self, ValueClass::Exact(_))
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            ValueClass::Exact(q) => decimal::format_rational(q, digits),
            ValueClass::Irrational(b) => b.to_decimal(digits),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueOrdering {
    Less,
    Greater,
    EqualExact,
    Indistinguishable,
}

/// A value the harnesses can compare: an exact rational or an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Exact(Q),
    Expr(Tower),
}

impl Real {
    pub fn closed(&self) -> Option<Closed> {
        match self {
            Real::Exact(q) if *q > 0 => Radical::from_rational(q).map(Closed::Algebraic),
            Real::Exact(_) => None,
            Real::Expr(t) => tower_closed(t),
        }
    }

    pub fn exact(&self) -> Option<Q> {
        match self {
            Real::Exact(q) => Some(q.clone()),
            Real::Expr(t) => exact_rational(t),
        }
    }

    pub fn interval(&self, bits: u32) -> Interval {
        match self {
            Real::Exact(q) => Interval::point(q, bits),
            Real::Expr(t) => tower_interval(t, bits),
        }
    }
}

impl From<Tower> for Real {
    fn from(t: Tower) -> Self {
        Real::Expr(t)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Expr(t) => write!(f, "{t}"),
        }
    }
}

/// Reduced rational value when the tower provably has one.
pub fn exact_rational(expr: &Tower) -> Option<Q> {
    tower_closed(expr)?.to_rational()
}

pub fn classify(expr: &Tower, policy: &PrecisionPolicy) -> ValueClass {
    match exact_rational(expr) {
        Some(q) => ValueClass::Exact(q),
        None => ValueClass::Irrational(RealBall::from(&tower_interval(
            expr,
            PrecisionPolicy::bits(policy.start_digits),
        ))),
    }
}

/// Extra bits so that relative precision covers an absolute target.
fn magnitude_bits(iv: &Interval) -> u32 {
    iv.hi().get_exp().map_or(0, |e| e.max(0) as u32)
}

pub fn eval_ball(
    expr: &Tower,
    abs_err: &Tolerance,
    policy: &PrecisionPolicy,
) -> Result<RealBall, EvalError> {
    if let Some(q) = exact_rational(expr) {
        let bits = PrecisionPolicy::bits(policy.start_digits) + rational_bits(&q);
        let b = RealBall::from(&Interval::point(&q, bits));
        if *b.rad() <= *abs_err.value() {
            return Ok(b);
        }
    }
    let probe = tower_interval(expr, 64);
    if !probe.hi().is_finite() {
        return Err(EvalError::OutOfRange);
    }
    let extra = magnitude_bits(&probe);
    for d in policy.schedule() {
        let iv = tower_interval(expr, PrecisionPolicy::bits(d) + extra);
        let b = RealBall::from(&iv);
        if *b.rad() <= *abs_err.value() {
            return Ok(b);
        }
    }
    Err(EvalError::PrecisionCapExceeded {
        cap_digits: policy.cap_digits,
    })
}

fn rational_bits(q: &Q) -> u32 {
    q.numer().significant_bits() + q.denom().significant_bits()
}

fn separate(a: &Real, b: &Real, policy: &PrecisionPolicy) -> Option<Ordering> {
    policy.schedule().into_iter().find_map(|d| {
        let bits = PrecisionPolicy::bits(d);
        a.interval(bits).separation(&b.interval(bits))
    })
}

/// Orders two values. Equality is only ever reported when it is exact:
/// structurally identical expressions, equal rationals, or identical
/// normal forms.
pub fn compare_values(a: &Real, b: &Real, policy: &PrecisionPolicy) -> ValueOrdering {
    if a == b {
        return ValueOrdering::EqualExact;
    }
    if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
        return match x.cmp(&y) {
            Ordering::Less => ValueOrdering::Less,
            Ordering::Greater => ValueOrdering::Greater,
            Ordering::Equal => ValueOrdering::EqualExact,
        };
    }
    if let (Some(x), Some(y)) = (a.closed(), b.closed()) {
        if x == y {
            return ValueOrdering::EqualExact;
        }
        match x.exact_cmp(&y) {
            Some(Ordering::Less) => return ValueOrdering::Less,
            Some(Ordering::Greater) => return ValueOrdering::Greater,
            _ => {}
        }
    }
    match separate(a, b, policy) {
        Some(Ordering::Less) => ValueOrdering::Less,
        Some(Ordering::Greater) => ValueOrdering::Greater,
        _ => ValueOrdering::Indistinguishable,
    }
}

pub fn compare_towers(e1: &Tower, e2: &Tower, policy: &PrecisionPolicy) -> ValueOrdering {
    compare_values(&Real::Expr(e1.clone()), &Real::Expr(e2.clone()), policy)
}

/// Integer part and the first `k` digits after the point. Terminating
/// expansions are written with trailing zeros, never trailing nines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digits {
    pub integer: String,
    pub fraction: String,
    pub exact: bool,
}

impl Digits {
    /// Digit at 1-based position `k` after the point.
    pub fn at(&self, k: usize) -> u8 {
        self.fraction.as_bytes()[k - 1] - b'0'
    }
}

pub fn decimal_digits(value: &Real, k: usize, policy: &PrecisionPolicy) -> Result<Digits, EvalError> {
    if let Some(q) = value.exact() {
        let (integer, fraction) = decimal::fraction_digits_exact(&q, k);
        return Ok(Digits {
            integer,
            fraction,
            exact: true,
        });
    }
    let probe = value.interval(64);
    if !probe.hi().is_finite() {
        return Err(EvalError::OutOfRange);
    }
    let scale = Integer::from(10).pow(k as u32);
    let extra = magnitude_bits(&probe) + (k as f64 * std::f64::consts::LOG2_10) as u32;
    for d in policy.schedule() {
        let iv = value.interval(PrecisionPolicy::bits(d) + extra);
        let lo = floor_scaled(iv.lo(), &scale, Round::Down);
        let hi = floor_scaled(iv.hi(), &scale, Round::Up);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo == hi {
                let (integer, fraction) = lo.div_rem_floor(scale);
                return Ok(Digits {
                    integer: integer.to_string(),
                    fraction: decimal::pad(&fraction, k),
                    exact: false,
                });
            }
        }
    }
    Err(EvalError::DigitUndecidable {
        position: k,
        cap_digits: policy.cap_digits,
    })
}

fn floor_scaled(x: &Float, scale: &Integer, round: Round) -> Option<Integer> {
    let mut y = Float::with_val(x.prec() + scale.significant_bits() + 8, x);
    y.mul_assign_round(scale, round);
    y.to_integer_round(Round::Down).map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tower {
        Tower::parse(s).unwrap()
    }

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn overflow_is_reported() {
        // 2^(3^27) is an integer far past the exponent range
        let v = t("(2/1)^{(3/1)^[(3/1)^(3/1)]}");
        assert_eq!(eval_ball(&v, &Tolerance::pow10(10), &policy()), Err(EvalError::OutOfRange));
        assert_eq!(decimal_digits(&Real::Expr(v), 5, &policy()), Err(EvalError::OutOfRange));
    }

    #[test]
    fn schedule_doubles_to_cap() {
        assert_eq!(policy().schedule(), vec![64, 128, 256, 512, 1024, 2048, 4096]);
        let p = PrecisionPolicy {
            start_digits: 100,
            cap_digits: 300,
        };
        assert_eq!(p.schedule(), vec![100, 200, 300]);
    }

    #[test]
    fn exact_values() {
        assert_eq!(exact_rational(&t("(4/1)^(1/2)")), Some(Q::from(2)));
        assert_eq!(exact_rational(&t("(2/1)^(1/2)")), None);
        assert_eq!(exact_rational(&t("(2/1)^(4/1)")), Some(Q::from(16)));
        assert_eq!(exact_rational(&t("(2/4)")), Some(Q::from((1, 2))));
    }

    #[test]
    fn two_to_root_two() {
        let b = eval_ball(&t("(2/1)^[(2/1)^(1/2)]"), &Tolerance::pow10(50), &policy()).unwrap();
        assert!(*b.rad() <= 1e-50);
        assert!(b
            .to_decimal(40)
            .starts_with("2.665144142690225188650297249873139848274"));
    }

    #[test]
    fn unit_and_square() {
        let b = eval_ball(&t("(1/1)"), &Tolerance::pow10(30), &policy()).unwrap();
        assert_eq!(*b.mid(), 1);
        assert_eq!(*b.rad(), 0);
        let b = eval_ball(&t("(4/1)^(1/2)"), &Tolerance::pow10(10), &policy()).unwrap();
        assert!(b.contains(&Q::from(2)));
    }

    #[test]
    fn cap_is_enforced() {
        let p = PrecisionPolicy {
            start_digits: 64,
            cap_digits: 128,
        };
        assert_eq!(
            eval_ball(&t("(2/1)^(1/2)"), &Tolerance::pow10(500), &p),
            Err(EvalError::PrecisionCapExceeded { cap_digits: 128 })
        );
    }

    #[test]
    fn comparisons() {
        let p = policy();
        assert_eq!(compare_towers(&t("(2/2)"), &t("(1/1)"), &p), ValueOrdering::EqualExact);
        assert_eq!(compare_towers(&t("(2/1)^(1/2)"), &t("(3/2)"), &p), ValueOrdering::Less);
        let e = t("(2/1)^[(2/1)^(1/2)]");
        assert_eq!(compare_towers(&e, &e, &p), ValueOrdering::EqualExact);
        assert_eq!(compare_towers(&t("(2/1)^(2/3)"), &t("(4/1)^(1/3)"), &p), ValueOrdering::EqualExact);
        assert_eq!(compare_towers(&t("(3/1)"), &t("(2/1)^(3/2)"), &p), ValueOrdering::Greater);
    }

    #[test]
    fn digits() {
        let p = policy();
        let d = decimal_digits(&Real::Expr(t("(1/2)")), 3, &p).unwrap();
        assert_eq!(d.fraction, "500");
        assert!(d.exact);
        let d = decimal_digits(&Real::Expr(t("(2/1)^(1/2)")), 5, &p).unwrap();
        assert_eq!((d.integer.as_str(), d.fraction.as_str()), ("1", "41421"));
        assert!(!d.exact);
        let d = decimal_digits(&Real::Expr(t("(1/1)")), 4, &p).unwrap();
        assert_eq!(d.fraction, "0000");
        let d = decimal_digits(&Real::Exact(Q::from((-1, 4))), 2, &p).unwrap();
        assert_eq!((d.integer.as_str(), d.fraction.as_str()), ("-1", "75"));
    }

    #[test]
    fn tolerance_parsing() {
        assert!("1e-50".parse::<Tolerance>().is_ok());
        assert!("0".parse::<Tolerance>().is_err());
        assert!("-1e-3".parse::<Tolerance>().is_err());
    }
}
