use rug::ops::Pow;
use rug::Rational as Q;
use towerseq::cantor::{
    diagonal, difference_profile, nested_intervals, straddle_pair, DigitRule, SequenceSource,
    Termination,
};
use towerseq::enumerate::EnumConfig;
use towerseq::eval::{PrecisionPolicy, Real};

fn q(n: i64, d: i64) -> Real {
    Real::Exact(Q::from((n, d)))
}

/// Stern's diatomic sequence gives the Calkin-Wilf order as s(n)/s(n+1).
fn stern(n: u64) -> u64 {
    match n {
        0 => 0,
        1 => 1,
        _ if n % 2 == 0 => stern(n / 2),
        _ => stern(n / 2) + stern(n / 2 + 1),
    }
}

fn calkin_wilf_oracle(i: usize) -> Q {
    let i = i as u64;
    Q::from((stern(i), stern(i + 1)))
}

#[test]
fn calkin_wilf_matches_stern() {
    let mut src = SequenceSource::calkin_wilf();
    for i in 1..=2000 {
        assert_eq!(*src.get(i).unwrap().unwrap(), Real::Exact(calkin_wilf_oracle(i)), "{i}");
    }
}

/// Straight replay of the construction on exact rationals.
fn replay(depth: usize) -> Vec<(usize, Q, usize, Q)> {
    let (mut lo, mut hi) = (Q::new(), Q::from(1));
    let mut next = 1;
    let mut out = Vec::new();
    for _ in 0..depth {
        let mut picked = Vec::new();
        while picked.len() < 2 {
            let v = calkin_wilf_oracle(next);
            if lo < v && v < hi {
                picked.push((next, v));
            }
            next += 1;
        }
        let (a, b) = (picked[0].clone(), picked[1].clone());
        let (a, b) = if a.1 < b.1 { (a, b) } else { (b, a) };
        lo = a.1.clone();
        hi = b.1.clone();
        out.push((a.0, a.1, b.0, b.1));
    }
    out
}

#[test]
fn calkin_wilf_trace_matches_replay() {
    let p = PrecisionPolicy::default();
    let mut src = SequenceSource::calkin_wilf();
    let trace = nested_intervals(&mut src, q(0, 1), q(1, 1), 6, 1_000_000, &p).unwrap();
    assert_eq!(trace.termination, Termination::DepthReached);
    let expected = replay(6);
    for (level, (ai, a, bi, b)) in trace.levels.iter().zip(expected) {
        assert_eq!((level.alpha_index, level.beta_index), (ai, bi));
        assert_eq!(level.alpha, Real::Exact(a));
        assert_eq!(level.beta, Real::Exact(b));
    }
}

#[test]
fn traces_are_strictly_nested_and_replayable() {
    let p = PrecisionPolicy::default();
    // the tower stream needs ~100k elements for a fifth level, so stop at four
    for (mut src, a, b, depth) in [
        (SequenceSource::calkin_wilf(), q(0, 1), q(1, 1), 5),
        (SequenceSource::straddle(), q(0, 1), q(2, 1), 5),
        (SequenceSource::towers(EnumConfig::default()), q(1, 1), q(2, 1), 4),
    ] {
        let trace = nested_intervals(&mut src, a.clone(), b.clone(), depth, 100_000, &p).unwrap();
        assert_eq!(trace.levels.len(), depth);
        let mut outer = (a.clone(), b.clone());
        for level in &trace.levels {
            let lt = |x: &Real, y: &Real| {
                towerseq::eval::compare_values(x, y, &p) == towerseq::ValueOrdering::Less
            };
            assert!(lt(&outer.0, &level.alpha));
            assert!(lt(&level.alpha, &level.beta));
            assert!(lt(&level.beta, &outer.1));
            assert_eq!(*src.get(level.alpha_index).unwrap().unwrap(), level.alpha);
            assert_eq!(*src.get(level.beta_index).unwrap().unwrap(), level.beta);
            outer = (level.alpha.clone(), level.beta.clone());
        }
    }
}

#[test]
fn straddle_gap_closes_exactly() {
    let one = Q::from(1);
    let mut last = Q::from(1);
    for n in 0..=998u64 {
        let (lo, hi) = straddle_pair(n);
        assert!(lo < one && one < hi);
        assert_eq!(Q::from(&lo * &hi), 1);
        let gap = Q::from(&one - &lo);
        assert_eq!(gap, Q::from((1, n + 2)));
        assert!(gap < last);
        last = gap;
    }
}

#[test]
fn straddle_trace_follows_the_closed_form() {
    let p = PrecisionPolicy::default();
    let mut src = SequenceSource::straddle();
    let trace = nested_intervals(&mut src, q(0, 1), q(2, 1), 40, 100, &p).unwrap();
    for (n, level) in trace.levels.iter().enumerate() {
        let n = n as i64;
        assert_eq!(level.alpha, q(2 + 2 * n, 4 + 2 * n));
        assert_eq!(level.beta, q(6 + 2 * n, 4 + 2 * n));
    }
}

#[test]
fn diagonal_over_towers() {
    let p = PrecisionPolicy::default();
    let run = || {
        let mut src = SequenceSource::towers(EnumConfig::default());
        diagonal(&mut src, 50, &DigitRule::default(), &p).unwrap()
    };
    let r = run();
    assert_eq!(r.rows.len(), 50);
    for row in &r.rows {
        assert_ne!(row.diagonal_digit, row.new_digit);
        assert!(row.first_difference <= row.nu);
        assert_eq!(row.digits.len(), 50);
    }
    assert_eq!(r, run());
    let profile = difference_profile(&r);
    for row in &profile {
        assert_eq!(row.series, Q::from((1, rug::Integer::from(10).pow(row.k as u32))));
        assert!(row.lower <= row.upper);
    }
}

#[test]
fn diagonal_digit_matches_fractional_part() {
    // the fifth entry is 1/3
    let mut src = SequenceSource::towers(EnumConfig::default());
    let r = diagonal(&mut src, 5, &DigitRule::default(), &PrecisionPolicy::default()).unwrap();
    assert_eq!(r.rows[4].value, "(1/3)");
    assert_eq!(r.rows[4].digits, "33333");
    assert_eq!(r.rows[1].integer_part, "2");
}
