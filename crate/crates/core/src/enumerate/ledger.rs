//! Committed values and the duplicate test.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rug::float::Round;
use rug::{Float, Rational as Q};

use crate::eval::{tower_closed, tower_interval, Closed, Interval, PrecisionPolicy};
use crate::expr::Tower;

/// Relative widths above this go to a linear side list instead of the index.
const NARROW: f64 = 1e-9;

/// A candidate with everything the duplicate test needs, computed once.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub tower: Tower,
    pub weight: u32,
    pub closed: Option<Closed>,
    pub exact: Option<Q>,
    pub interval: Interval,
}

impl Candidate {
    pub fn evaluate(tower: Tower, weight: u32, bits: u32) -> Self {
        let closed = tower_closed(&tower);
        let exact = closed.as_ref().and_then(Closed::to_rational);
        let interval = match &exact {
            Some(q) => Interval::point(q, bits),
            None => tower_interval(&tower, bits),
        };
        Candidate {
            tower,
            weight,
            closed,
            exact,
            interval,
        }
    }

    fn interval_at(&self, bits: u32) -> Interval {
        match &self.exact {
            Some(q) => Interval::point(q, bits),
            None => tower_interval(&self.tower, bits),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Verdict {
    Novel,
    Duplicate { of: usize },
    /// Overlapping at the cap and not provably equal.
    Indistinguishable { with: usize },
}

/// Float key ordered totally; NaN never enters the index.
#[derive(Debug, Clone, PartialEq)]
struct Key(Float);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("no NaN keys")
    }
}

/// Committed entries with an exact set for rationals, a map of normal
/// forms, and an interval index for everything else.
#[derive(Debug, Default)]
pub struct DedupLedger {
    entries: Vec<Candidate>,
    exact: HashMap<Q, usize>,
    closed: HashMap<Closed, usize>,
    by_lower: BTreeMap<Key, Vec<usize>>,
    wide: Vec<usize>,
    max_rel_width: f64,
}

impl DedupLedger {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn expr(&self, i: usize) -> &Tower {
        &self.entries[i].tower
    }

    pub(crate) fn commit(&mut self, cand: Candidate) -> usize {
        let i = self.entries.len();
        if let Some(q) = &cand.exact {
            self.exact.entry(q.clone()).or_insert(i);
        }
        if let Some(c) = &cand.closed {
            self.closed.entry(c.clone()).or_insert(i);
        }
        match relative_width(&cand.interval) {
            Some(rel) if rel <= NARROW => {
                self.max_rel_width = self.max_rel_width.max(rel);
                self.by_lower
                    .entry(Key(cand.interval.lo().clone()))
                    .or_default()
                    .push(i);
            }
            _ => self.wide.push(i),
        }
        self.entries.push(cand);
        i
    }

    /// Committed entries whose interval meets `iv`.
    fn overlapping(&self, iv: &Interval) -> Vec<usize> {
        let mut found: Vec<usize> = Vec::new();
        let prec = iv.prec();
        // an entry with lower end L and relative width r reaches at most L(1+r)
        let shrink = Float::with_val_round(prec, 1.0 - 2.0 * self.max_rel_width - 1e-15, Round::Down).0;
        let from = Float::with_val_round(prec, iv.lo() * &shrink, Round::Down).0;
        for (_, ids) in self
            .by_lower
            .range(Key(from)..=Key(iv.hi().clone()))
        {
            found.extend(ids.iter().copied().filter(|&j| self.entries[j].interval.overlaps(iv)));
        }
        found.extend(self.wide.iter().copied().filter(|&j| self.entries[j].interval.overlaps(iv)));
        found.sort_unstable();
        found
    }

    pub(crate) fn judge(&self, cand: &Candidate, policy: &PrecisionPolicy) -> Verdict {
        // rationals are decided exactly and never by intervals
        if let Some(q) = &cand.exact {
            return match self.exact.get(q) {
                Some(&of) => Verdict::Duplicate { of },
                None => Verdict::Novel,
            };
        }
        if let Some(c) = &cand.closed {
            if let Some(&of) = self.closed.get(c) {
                return Verdict::Duplicate { of };
            }
        }
        for j in self.overlapping(&cand.interval) {
            let other = &self.entries[j];
            let distinct = match (&cand.closed, &other.closed) {
                (Some(a), Some(b)) => a.provably_differs(b),
                _ => false,
            };
            if !distinct && !self.separated(cand, other, policy) {
                return Verdict::Indistinguishable { with: j };
            }
        }
        Verdict::Novel
    }

    fn separated(&self, a: &Candidate, b: &Candidate, policy: &PrecisionPolicy) -> bool {
        let base = a.interval.prec();
        policy
            .schedule()
            .into_iter()
            .map(PrecisionPolicy::bits)
            .filter(|&bits| bits > base)
            .any(|bits| a.interval_at(bits).separation(&b.interval_at(bits)).is_some())
    }
}

fn relative_width(iv: &Interval) -> Option<f64> {
    if iv.lo().is_zero() || !iv.hi().is_finite() {
        return None;
    }
    let w = Float::with_val_round(53, iv.hi() - iv.lo(), Round::Up).0;
    let r = Float::with_val_round(53, &w / iv.lo(), Round::Up).0;
    Some(r.to_f64_round(Round::Up))
}
