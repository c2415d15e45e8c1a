//! Decimal literals in and out.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational as Q};

/// Parses `[-+]digits[.digits][e[-+]digits]` exactly.
pub fn parse_decimal(text: &str) -> Option<Q> {
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: Integer = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    if scale.unsigned_abs() > 100_000 {
        return None;
    }
    let ten = Integer::from(10).pow(scale.unsigned_abs());
    let mut q = if scale >= 0 {
        Q::from(digits * ten)
    } else {
        Q::from((digits, ten))
    };
    if negative {
        q = -q;
    }
    Some(q)
}

/// Number of digits after the decimal point in a literal, ignoring any
/// exponent suffix.
pub fn fractional_digits(text: &str) -> usize {
    let s = text.trim();
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    mantissa.split_once('.').map_or(0, |(_, f)| f.len())
}

/// `digits` significant digits, positional for moderate magnitudes.
pub fn format_float(x: &Float, digits: usize) -> String {
    format_float_round(x, digits, Round::Nearest)
}

/// Like [`format_float`], rounding in the given direction.
pub fn format_float_round(x: &Float, digits: usize, round: Round) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (negative, mut mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits.max(1)), round);
    let exp = exp.expect("finite");
    // value = 0.mantissa * 10^exp
    while mantissa.len() > 1 && mantissa.ends_with('0') {
        mantissa.pop();
    }
    let sign = if negative { "-" } else { "" };
    let len = mantissa.len() as i32;
    if (-5..=21).contains(&exp) {
        if exp <= 0 {
            format!("{sign}0.{}{mantissa}", "0".repeat((-exp) as usize))
        } else if exp >= len {
            format!("{sign}{mantissa}{}", "0".repeat((exp - len) as usize))
        } else {
            let (a, b) = mantissa.split_at(exp as usize);
            format!("{sign}{a}.{b}")
        }
    } else {
        let (a, b) = mantissa.split_at(1);
        let dot = if b.is_empty() { "" } else { "." };
        format!("{sign}{a}{dot}{b}e{}", exp - 1)
    }
}

pub fn format_rational(q: &Q, digits: usize) -> String {
    let bits = (digits as f64 * std::f64::consts::LOG2_10) as u32 + 64;
    let f = Float::with_val_round(bits, q, Round::Nearest).0;
    format_float(&f, digits)
}

/// Exact positional form when `q` has a terminating expansion, otherwise
/// 30 significant digits.
pub fn format_exact(q: &Q) -> String {
    let mut den = q.denom().clone();
    let mut k = 0usize;
    for p in [2u32, 5] {
        let mut c = 0;
        while den.is_divisible_u(p) {
            den /= p;
            c += 1;
        }
        k = k.max(c);
    }
    if den != 1 {
        return format_rational(q, 30);
    }
    let sign = if *q < 0 { "-" } else { "" };
    let (int, frac) = fraction_digits_exact(&Q::from(q.abs_ref()), k);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Floor of `q * 10^k`, rendered as exactly `k` digits of the fractional part.
pub fn fraction_digits_exact(q: &Q, k: usize) -> (String, String) {
    let floor = q.clone().floor();
    let frac = Q::from(q - &floor);
    let scaled = frac * Integer::from(10).pow(k as u32);
    let n = scaled.floor().into_numer_denom().0;
    (floor.into_numer_denom().0.to_string(), pad(&n, k))
}

pub(crate) fn pad(n: &Integer, k: usize) -> String {
    let s = n.to_string();
    if s.len() >= k {
        s
    } else {
        format!("{}{s}", "0".repeat(k - s.len()))
    }
}
