//! Best enumerated approximants to a target and how they improve with weight.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational as Q};
use serde::Serialize;

use crate::decimal::{format_float_round, fractional_digits, parse_decimal};
use crate::enumerate::{entries_up_to, EnumConfig, EnumError, SequenceEntry};
use crate::eval::ValueClass;
use crate::expr::Tower;

/// Precision of reported error bounds.
const ERROR_BITS: u32 = 128;

// truncated, so each constant lies in [t, t + 10^-105]
const E: &str = "2.718281828459045235360287471352662497757247093699959574966967627724076630353547594571382178525166427427466";
const PI: &str = "3.141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117067982148";
const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680009493393621969694715605863326996418687542001";
const SQRT2: &str = "1.414213562373095048801688724209698078569671875376948073176679737990732478462107038850387534327641572735013";

/// A target value known to lie in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    label: String,
    lo: Q,
    hi: Q,
}

impl TargetSpec {
    /// One of `e`, `pi`, `ln2`, `sqrt2`.
    pub fn named(name: &str) -> Option<Self> {
        let digits = match name {
            "e" => E,
            "pi" => PI,
            "ln2" => LN2,
            "sqrt2" => SQRT2,
            _ => return None,
        };
        let lo = parse_decimal(digits).expect("valid constant");
        let width = Q::from((1, Integer::from(10).pow(fractional_digits(digits) as u32)));
        Some(TargetSpec {
            label: name.to_string(),
            hi: Q::from(&lo + &width),
            lo,
        })
    }

    /// A decimal literal, taken as an exact value.
    pub fn decimal(text: &str) -> Option<Self> {
        let v = parse_decimal(text)?;
        Some(TargetSpec {
            label: text.trim().to_string(),
            lo: v.clone(),
            hi: v,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    /// Upper bound on `|v - t|` over every value `v` of the entry and
    /// every admissible target `t`.
    pub fn error_bound(&self, value: &ValueClass) -> Float {
        match value {
            ValueClass::Exact(q) => {
                let a = Q::from(q - &self.lo).abs();
                let b = Q::from(q - &self.hi).abs();
                Float::with_val_round(ERROR_BITS, a.max(b), Round::Up).0
            }
            ValueClass::Irrational(ball) => {
                let a = Float::with_val_round(ERROR_BITS, &ball.hi() - &self.lo, Round::Up).0;
                let b = Float::with_val_round(ERROR_BITS, &self.hi - &ball.lo(), Round::Up).0;
                a.max(&b)
            }
        }
    }

    /// Lower bound on `|v - t|`, for pruning.
    fn distance_floor(&self, value: &ValueClass) -> Float {
        let (lo, hi) = match value {
            ValueClass::Exact(q) => (
                Float::with_val_round(ERROR_BITS, q, Round::Down).0,
                Float::with_val_round(ERROR_BITS, q, Round::Up).0,
            ),
            ValueClass::Irrational(ball) => (ball.lo(), ball.hi()),
        };
        let above = Float::with_val_round(ERROR_BITS, &lo - &self.hi, Round::Down).0;
        let below = Float::with_val_round(ERROR_BITS, &self.lo - &hi, Round::Down).0;
        above.max(&below).max(&Float::new(ERROR_BITS))
    }
}

impl FromStr for TargetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TargetSpec::named(s)
            .or_else(|| TargetSpec::decimal(s))
            .ok_or_else(|| format!("unknown target {s:?}: expected e, pi, ln2, sqrt2 or a decimal"))
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximant {
    pub index: usize,
    pub expr: Tower,
    pub weight: u32,
    /// Certified upper bound on the distance to the target.
    pub error: Float,
}

impl Approximant {
    pub fn error_string(&self) -> String {
        format_float_round(&self.error, 6, Round::Up)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    #[default]
    Exhaustive,
    /// Skips entries whose distance provably exceeds the best error so far.
    Pruned,
}

fn better(a: &(Float, usize), b: &(Float, usize)) -> bool {
    match a.0.partial_cmp(&b.0).expect("no NaN") {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.1 < b.1,
    }
}

fn to_approximant(e: &SequenceEntry, error: Float) -> Approximant {
    Approximant {
        index: e.index,
        expr: e.expr.clone(),
        weight: e.weight,
        error,
    }
}

/// The entry with the smallest certified error; ties go to the lower index.
pub fn search(entries: &[SequenceEntry], target: &TargetSpec, mode: SearchMode) -> Option<Approximant> {
    match mode {
        SearchMode::Exhaustive => {
            let scored: Vec<(Float, usize)> = entries
                .par_iter()
                .enumerate()
                .map(|(i, e)| (target.error_bound(&e.value), i))
                .collect();
            let best = scored
                .into_iter()
                .reduce(|a, b| if better(&b, &a) { b } else { a })?;
            Some(to_approximant(&entries[best.1], best.0))
        }
        SearchMode::Pruned => {
            let mut best: Option<(Float, usize)> = None;
            for (i, e) in entries.iter().enumerate() {
                if let Some((err, _)) = &best {
                    if target.distance_floor(&e.value) > *err {
                        continue;
                    }
                }
                let cand = (target.error_bound(&e.value), i);
                if best.as_ref().map_or(true, |b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
            best.map(|(err, i)| to_approximant(&entries[i], err))
        }
    }
}

pub fn best_approx(
    target: &TargetSpec,
    max_weight: u32,
    config: EnumConfig,
) -> Result<Approximant, EnumError> {
    assert!(max_weight >= 2, "the first entry has weight 2");
    let entries = entries_up_to(max_weight, config)?;
    Ok(search(&entries, target, SearchMode::Exhaustive).expect("nonempty"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub target: String,
    pub rows: Vec<(u32, Approximant)>,
}

impl DensityProfile {
    /// `weight,expr,error_upper_bound` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,expr,error_upper_bound\n");
        for (w, a) in &self.rows {
            out.push_str(&format!("{w},{},{}\n", a.expr, a.error_string()));
        }
        out
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|p| p[1].1.error <= p[0].1.error)
    }
}

#[derive(Serialize)]
struct ProfileRecord<'a> {
    weight: u32,
    index: usize,
    expr: String,
    error_upper_bound: String,
    target: &'a str,
}

impl DensityProfile {
    pub fn to_jsonl(&self) -> String {
        self.rows
            .iter()
            .map(|(w, a)| {
                serde_json::to_string(&ProfileRecord {
                    weight: *w,
                    index: a.index,
                    expr: a.expr.render(),
                    error_upper_bound: a.error_string(),
                    target: &self.target,
                })
                .expect("plain record")
                    + "\n"
            })
            .collect()
    }
}

/// Best approximant for each weight bound, from a single enumeration up
/// to the largest bound.
pub fn density_profile(
    target: &TargetSpec,
    weights: &[u32],
    config: EnumConfig,
) -> Result<DensityProfile, EnumError> {
    assert!(weights.windows(2).all(|p| p[0] < p[1]), "weights must ascend");
    let Some(&max) = weights.last() else {
        return Ok(DensityProfile {
            target: target.label.clone(),
            rows: Vec::new(),
        });
    };
    let entries = entries_up_to(max.max(2), config)?;
    let mut rows = Vec::new();
    for &w in weights {
        let upto = entries.partition_point(|e| e.weight <= w);
        if let Some(a) = search(&entries[..upto], target, SearchMode::Exhaustive) {
            rows.push((w, a));
        }
    }
    Ok(DensityProfile {
        target: target.label.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn constants_enclose_mpfr_values() {
        use rug::float::Constant;
        let prec = 500;
        let cases = [
            ("e", Float::with_val(prec, 1).exp()),
            ("pi", Float::with_val(prec, Constant::Pi)),
            ("ln2", Float::with_val(prec, Constant::Log2)),
            ("sqrt2", Float::with_val(prec, 2).sqrt()),
        ];
        for (name, v) in cases {
            let t = TargetSpec::named(name).unwrap();
            assert!(t.lo <= v && v <= t.hi, "{name}");
        }
    }

    #[test]
    fn exact_hit() {
        let a = best_approx(&"2".parse().unwrap(), 3, config()).unwrap();
        assert_eq!(a.expr.render(), "(2/1)");
        assert!(a.error.is_zero());
    }

    #[test]
    fn square_root_of_two() {
        let a = best_approx(&TargetSpec::named("sqrt2").unwrap(), 6, config()).unwrap();
        assert_eq!(a.expr.render(), "(2/1)^(1/2)");
        assert!(a.error <= 1e-50);
    }

    #[test]
    fn pruning_agrees_with_exhaustive() {
        let entries = entries_up_to(10, config()).unwrap();
        for name in ["e", "pi", "ln2", "sqrt2", "0.123", "7"] {
            let t: TargetSpec = name.parse().unwrap();
            assert_eq!(
                search(&entries, &t, SearchMode::Exhaustive),
                search(&entries, &t, SearchMode::Pruned),
                "{name}"
            );
        }
    }

    #[test]
    fn profile_for_one() {
        let p = density_profile(&"1".parse().unwrap(), &[2, 4, 6], config()).unwrap();
        assert!(p.rows.iter().all(|(_, a)| a.error.is_zero() && a.index == 1));
        assert!(p.to_csv().starts_with("weight,expr,error_upper_bound\n2,(1/1),0\n"));
    }
}
