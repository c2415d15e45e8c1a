use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::PowAssignRound;
use rug::{Float, Rational as Q};

use crate::expr::{Atom, Rational, Tower};

/// Closed interval with outward-rounded endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl Interval {
    pub fn point(q: &Q, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, q, Round::Down).0,
            hi: Float::with_val_round(prec, q, Round::Up).0,
        }
    }

    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    fn is_exact_one(&self) -> bool {
        self.lo == 1 && self.hi == 1
    }

    /// `self ^ exp` for a positive base and a nonnegative exponent.
    pub fn pow(&self, exp: &Interval) -> Interval {
        if self.is_exact_one() {
            return self.clone();
        }
        let (lo_exp, hi_exp) = if self.lo >= 1 {
            (&exp.lo, &exp.hi)
        } else if self.hi <= 1 {
            (&exp.hi, &exp.lo)
        } else {
            (&exp.hi, &exp.hi)
        };
        let mut lo = self.lo.clone();
        lo.pow_assign_round(lo_exp, Round::Down);
        let mut hi = self.hi.clone();
        hi.pow_assign_round(hi_exp, Round::Up);
        Interval { lo, hi }
    }

    /// `Less`/`Greater` when the intervals are disjoint.
    pub fn separation(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.separation(other).is_none()
    }

    pub fn contains(&self, q: &Q) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }
}

pub fn fraction_interval(r: &Rational, prec: u32) -> Interval {
    Interval::point(&r.value(), prec)
}

pub fn atom_interval(atom: &Atom, prec: u32) -> Interval {
    let f = |r| fraction_interval(r, prec);
    match atom {
        Atom::Frac(r) => f(r),
        Atom::Pow(b, e) => f(b).pow(&f(e)),
        Atom::PowPow(b, m, t) => {
            let base = f(b);
            if base.is_exact_one() {
                return base;
            }
            base.pow(&f(m).pow(&f(t)))
        }
    }
}

/// Interval enclosure of a tower at `prec` bits, evaluated top-down.
pub fn tower_interval(tower: &Tower, prec: u32) -> Interval {
    let (last, rest) = tower.atoms().split_last().expect("nonempty");
    rest.iter()
        .rev()
        .fold(atom_interval(last, prec), |exp, atom| {
            let base = atom_interval(atom, prec);
            if base.is_exact_one() {
                base
            } else {
                base.pow(&exp)
            }
        })
}

/// Midpoint with a rigorous absolute radius.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBall {
    mid: Float,
    rad: Float,
}

impl RealBall {
    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn lo(&self) -> Float {
        Float::with_val_round(self.mid.prec(), &self.mid - &self.rad, Round::Down).0
    }

    pub fn hi(&self) -> Float {
        Float::with_val_round(self.mid.prec(), &self.mid + &self.rad, Round::Up).0
    }

    pub fn contains(&self, q: &Q) -> bool {
        self.lo() <= *q && self.hi() >= *q
    }

    /// Midpoint to `digits` significant decimal digits; `>=lo` past the
    /// exponent range.
    pub fn to_decimal(&self, digits: usize) -> String {
        let s = crate::decimal::format_float(&self.mid, digits);
        if self.rad.is_finite() {
            s
        } else {
            format!(">={s}")
        }
    }
}

impl From<&Interval> for RealBall {
    fn from(iv: &Interval) -> Self {
        let prec = iv.prec() + 2;
        if !iv.hi.is_finite() {
            // overflow: only the lower end is informative
            return RealBall {
                mid: Float::with_val(prec, &iv.lo),
                rad: Float::with_val(prec, rug::float::Special::Infinity),
            };
        }
        let mut mid = Float::with_val(prec, &iv.lo + &iv.hi);
        mid /= 2;
        let up = Float::with_val_round(prec, &iv.hi - &mid, Round::Up).0;
        let down = Float::with_val_round(prec, &mid - &iv.lo, Round::Up).0;
        let rad = if up > down { up } else { down };
        RealBall { mid, rad }
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} +/- {}",
            crate::decimal::format_float(&self.mid, 30),
            crate::decimal::format_float(&self.rad, 3)
        )
    }
}
