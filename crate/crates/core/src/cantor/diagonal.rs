//! The diagonal construction on decimal digits of fractional parts.
//!
//! Digit `k` of a value means digit `k` after the point of its fractional
//! part `x - floor(x)`, with terminating expansions written `...d000`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational as Q};
use serde::Serialize;

use super::source::SequenceSource;
use super::HarnessError;
use crate::eval::{decimal_digits, Digits, PrecisionPolicy};

/// A digit map with no fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitRule([u8; 10]);

impl DigitRule {
    pub fn new(map: [u8; 10]) -> Result<Self, HarnessError> {
        for (d, &m) in map.iter().enumerate() {
            if m > 9 {
                return Err(HarnessError::InvalidInput(format!("digit rule maps {d} to {m}")));
            }
            if usize::from(m) == d {
                return Err(HarnessError::InvalidInput(format!("digit rule fixes {d}")));
            }
        }
        Ok(DigitRule(map))
    }

    pub fn apply(&self, d: u8) -> u8 {
        self.0[usize::from(d)]
    }
}

/// 5 for every digit except 5, which goes to 4.
impl Default for DigitRule {
    fn default() -> Self {
        DigitRule([5, 5, 5, 5, 5, 4, 5, 5, 5, 5])
    }
}

/// Ten digits, the image of 0 first: the default is `5555545555`.
impl FromStr for DigitRule {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 10 || !bytes.iter().all(u8::is_ascii_digit) {
            return Err(HarnessError::InvalidInput(format!(
                "digit rule {s:?} must be ten digits"
            )));
        }
        let mut map = [0u8; 10];
        for (m, b) in map.iter_mut().zip(bytes) {
            *m = b - b'0';
        }
        DigitRule::new(map)
    }
}

impl fmt::Display for DigitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|d| write!(f, "{d}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalRow {
    /// 1-based position in the source.
    pub nu: usize,
    pub value: String,
    pub integer_part: String,
    /// The first `n` digits of the fractional part.
    pub digits: String,
    pub exact: bool,
    /// `a_νν`: digit `ν` of element `ν`.
    pub diagonal_digit: u8,
    /// `b_ν`.
    pub new_digit: u8,
    /// First position where the new number's digits and this element's differ.
    pub first_difference: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalResult {
    pub n: usize,
    pub rule: String,
    pub rows: Vec<DiagonalRow>,
    /// `b_1 .. b_n`, the leading digits of the new number `0.b_1 b_2 ...`.
    pub digits: String,
}

pub fn diagonal(
    src: &mut SequenceSource,
    n: usize,
    rule: &DigitRule,
    policy: &PrecisionPolicy,
) -> Result<DiagonalResult, HarnessError> {
    let mut expansions: Vec<(String, Digits)> = Vec::with_capacity(n);
    for nu in 1..=n {
        let value = src
            .get(nu)?
            .cloned()
            .ok_or(HarnessError::SourceTooShort { needed: n, found: nu - 1 })?;
        let digits = decimal_digits(&value, n, policy)
            .map_err(|source| HarnessError::Digit { index: nu, source })?;
        expansions.push((value.to_string(), digits));
    }
    let new_digits: Vec<u8> = expansions
        .iter()
        .enumerate()
        .map(|(i, (_, d))| rule.apply(d.at(i + 1)))
        .collect();
    let rows = expansions
        .into_iter()
        .enumerate()
        .map(|(i, (value, d))| {
            let nu = i + 1;
            let first_difference = (1..=n)
                .find(|&k| new_digits[k - 1] != d.at(k))
                .expect("digit nu differs by construction");
            DiagonalRow {
                nu,
                value,
                integer_part: d.integer.clone(),
                diagonal_digit: d.at(nu),
                new_digit: new_digits[i],
                exact: d.exact,
                digits: d.fraction,
                first_difference,
            }
        })
        .collect();
    Ok(DiagonalResult {
        n,
        rule: rule.to_string(),
        rows,
        digits: new_digits.iter().map(|d| char::from(b'0' + d)).collect(),
    })
}

/// Bounds on the distance between the new number and element `k`'s
/// fractional part, read off from their digits alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub k: usize,
    pub first_difference: usize,
    /// `max(0, |b_j - x_j| - 1) · 10^-j` with `j` the first difference.
    pub lower: Q,
    /// `(|b_j - x_j| + 1) · 10^-j`.
    pub upper: Q,
    /// `10^-k`.
    pub series: Q,
}

/// Both numbers agree before position `j` and their tails after `j` lie
/// in `[0, 10^-j]`, which gives the two bounds.
pub fn difference_profile(result: &DiagonalResult) -> Vec<ProfileRow> {
    let b = result.digits.as_bytes();
    result
        .rows
        .iter()
        .map(|row| {
            let j = row.first_difference;
            let x = row.digits.as_bytes()[j - 1];
            let gap = u32::from(b[j - 1].abs_diff(x));
            let unit = pow10_inv(j);
            ProfileRow {
                k: row.nu,
                first_difference: j,
                lower: Q::from(&unit * gap.saturating_sub(1)),
                upper: Q::from(&unit * (gap + 1)),
                series: pow10_inv(row.nu),
            }
        })
        .collect()
}

fn pow10_inv(k: usize) -> Q {
    Q::from((1, Integer::from(10).pow(k as u32)))
}
