//! Exact normal forms for the values that admit one.
//!
//! A positive real `x` with `x^n` rational for some `n ≥ 1` has a unique
//! form `g^e` where `g > 1` is a rational that is not a perfect power and
//! `e` is a nonzero rational (or `x = 1`). Raising such a `g` to an
//! irrational radical gives a transcendental number, kept as `g^(±F)`.
//! Anything else is a right-associated chain `c1^(c2^(…))` of such forms,
//! folded from the top as far as it goes, so regrouping the top of a tower
//! does not change the form. Equal normal forms always mean equal values;
//! the form of a power `r^(p/q)` is rational exactly when `r` is a perfect
//! `q`-th power.

use rug::ops::Pow;
use rug::{Integer, Rational as Q};

use crate::expr::{Atom, Rational, Tower};

/// Radicands are only split into perfect powers up to this size.
const DECOMPOSE_BITS: u64 = 8192;
/// Largest rational value materialized from a normal form.
const MATERIALIZE_BITS: u64 = 1 << 18;

/// `base^exp`, with `base = 1, exp = 0` for the value one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Radical {
    base: Q,
    exp: Q,
}

impl Radical {
    pub fn one() -> Self {
        Radical {
            base: Q::from(1),
            exp: Q::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    pub fn base(&self) -> &Q {
        &self.base
    }

    pub fn exp(&self) -> &Q {
        &self.exp
    }

    pub fn from_rational(q: &Q) -> Option<Self> {
        assert!(*q > 0, "radicals are positive");
        if *q == 1 {
            return Some(Radical::one());
        }
        let (base, k) = decompose_rational(q)?;
        Some(Radical {
            base,
            exp: Q::from(k),
        })
    }

    pub fn is_rational(&self) -> bool {
        *self.exp.denom() == 1
    }

    /// The value as a reduced fraction; `None` if irrational or too large
    /// to write out.
    pub fn to_rational(&self) -> Option<Q> {
        if !self.is_rational() {
            return None;
        }
        if self.is_one() {
            return Some(Q::from(1));
        }
        let k = self.exp.numer();
        let k_abs = u32::try_from(k.clone().abs()).ok()?;
        if bits(&self.base).checked_mul(u64::from(k_abs))? > MATERIALIZE_BITS {
            return None;
        }
        let value = Q::from(&self.base).pow(k_abs);
        Some(if *k < 0 { value.recip() } else { value })
    }

    pub fn pow_rational(&self, r: &Q) -> Self {
        let exp = Q::from(&self.exp * r);
        if exp == 0 {
            Radical::one()
        } else {
            Radical {
                base: self.base.clone(),
                exp,
            }
        }
    }

    pub fn mul(&self, other: &Radical) -> Option<Radical> {
        if self.is_one() {
            return Some(other.clone());
        }
        if other.is_one() {
            return Some(self.clone());
        }
        if self.base == other.base {
            return Some(Radical::one().with_base_exp(&self.base, Q::from(&self.exp + &other.exp)));
        }
        // (g1^m1 * g2^m2)^(1/n) with n the common denominator
        let n = Integer::from(self.exp.denom().lcm_ref(other.exp.denom()));
        let n_small = u32::try_from(&n).ok()?;
        let m1 = Integer::from(self.exp.numer() * Integer::from(&n / self.exp.denom()));
        let m2 = Integer::from(other.exp.numer() * Integer::from(&n / other.exp.denom()));
        let p1 = signed_power(&self.base, &m1)?;
        let p2 = signed_power(&other.base, &m2)?;
        let product = p1 * p2;
        if product == 1 {
            return Some(Radical::one());
        }
        let (base, k) = decompose_rational(&product)?;
        Some(Radical {
            base,
            exp: Q::from((k, Integer::from(n_small))),
        })
    }

    fn with_base_exp(self, base: &Q, exp: Q) -> Radical {
        if exp == 0 {
            self
        } else {
            Radical {
                base: base.clone(),
                exp,
            }
        }
    }
}

/// A value with an exact normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Closed {
    Algebraic(Radical),
    /// `base^(±exponent)` where `exponent` is an irrational radical.
    Transcendental {
        base: Q,
        negative: bool,
        exponent: Radical,
    },
    /// `c1^(c2^(…))`, at least two tiers, the top pair not foldable.
    Chain(Vec<Closed>),
}

impl Closed {
    pub fn one() -> Self {
        Closed::Algebraic(Radical::one())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Closed::Algebraic(r) if r.is_one())
    }

    pub fn of_fraction(r: &Rational) -> Option<Closed> {
        Radical::from_rational(&r.value()).map(Closed::Algebraic)
    }

    pub fn to_rational(&self) -> Option<Q> {
        match self {
            Closed::Algebraic(r) => r.to_rational(),
            Closed::Transcendental { .. } | Closed::Chain(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Closed::Algebraic(r) if r.is_rational())
    }

    /// Algebraic forms are unique, so distinct ones are distinct values.
    pub fn provably_differs(&self, other: &Closed) -> bool {
        matches!((self, other), (Closed::Algebraic(a), Closed::Algebraic(b)) if a != b)
    }

    /// Exact order where it follows from the forms alone: one against
    /// anything algebraic, or two powers of the same base.
    pub fn exact_cmp(&self, other: &Closed) -> Option<std::cmp::Ordering> {
        let (Closed::Algebraic(a), Closed::Algebraic(b)) = (self, other) else {
            return None;
        };
        let zero = Q::new();
        match (a.is_one(), b.is_one()) {
            (true, _) => Some(zero.cmp(&b.exp)),
            (_, true) => Some(a.exp.cmp(&zero)),
            _ if a.base == b.base => Some(a.exp.cmp(&b.exp)),
            _ => None,
        }
    }
}

/// `base ^ exp` in closed form, when the result stays in the supported class.
pub fn pow(base: &Closed, exp: &Closed) -> Option<Closed> {
    if base.is_one() {
        return Some(Closed::one());
    }
    if exp.is_one() {
        return Some(base.clone());
    }
    let Closed::Algebraic(x) = exp else {
        return None;
    };
    match base {
        Closed::Algebraic(b) => {
            if x.is_rational() {
                let q = x.to_rational()?;
                return Some(Closed::Algebraic(b.pow_rational(&q)));
            }
            // g^e raised to an irrational radical x is g^(e x)
            let coefficient = Radical::from_rational(&Q::from(b.exp.abs_ref()))?;
            let exponent = x.mul(&coefficient)?;
            Some(Closed::Transcendental {
                base: b.base.clone(),
                negative: b.exp < 0,
                exponent,
            })
        }
        Closed::Transcendental {
            base,
            negative,
            exponent,
        } => {
            let product = exponent.mul(x)?;
            if product.is_rational() {
                let mut e = product.to_rational()?;
                if *negative {
                    e = -e;
                }
                Some(Closed::Algebraic(Radical {
                    base: base.clone(),
                    exp: e,
                }))
            } else {
                Some(Closed::Transcendental {
                    base: base.clone(),
                    negative: *negative,
                    exponent: product,
                })
            }
        }
        Closed::Chain(_) => None,
    }
}

fn fractions(atom: &Atom) -> Option<Vec<Closed>> {
    match atom {
        Atom::Frac(r) => Some(vec![Closed::of_fraction(r)?]),
        Atom::Pow(b, e) => Some(vec![Closed::of_fraction(b)?, Closed::of_fraction(e)?]),
        Atom::PowPow(b, m, t) => Some(vec![
            Closed::of_fraction(b)?,
            Closed::of_fraction(m)?,
            Closed::of_fraction(t)?,
        ]),
    }
}

/// Normal form of `tiers[0]^(tiers[1]^(…))`.
fn fold_chain(mut tiers: Vec<Closed>) -> Closed {
    // 1^x = 1, then x^1 = x
    if let Some(i) = tiers.iter().position(Closed::is_one) {
        tiers.truncate(i + 1);
    }
    while tiers.len() > 1 && tiers.last().is_some_and(Closed::is_one) {
        tiers.pop();
    }
    while tiers.len() > 1 {
        let n = tiers.len();
        match pow(&tiers[n - 2], &tiers[n - 1]) {
            Some(c) => {
                tiers.truncate(n - 2);
                tiers.push(c);
            }
            None => break,
        }
    }
    if tiers.len() == 1 {
        tiers.pop().expect("one tier")
    } else {
        Closed::Chain(tiers)
    }
}

pub fn atom_closed(atom: &Atom) -> Option<Closed> {
    fractions(atom).map(fold_chain)
}

/// Lower atoms are bases in their own right; the top atom's fractions
/// continue the chain.
pub fn tower_closed(tower: &Tower) -> Option<Closed> {
    let (last, rest) = tower.atoms().split_last().expect("nonempty");
    let mut tiers = rest.iter().map(atom_closed).collect::<Option<Vec<_>>>()?;
    tiers.extend(fractions(last)?);
    Some(fold_chain(tiers))
}

fn bits(q: &Q) -> u64 {
    u64::from(q.numer().significant_bits()) + u64::from(q.denom().significant_bits())
}

fn signed_power(base: &Q, k: &Integer) -> Option<Q> {
    let k_abs = u32::try_from(k.clone().abs()).ok()?;
    if bits(base).checked_mul(u64::from(k_abs))? > DECOMPOSE_BITS {
        return None;
    }
    let p = Q::from(base).pow(k_abs);
    Some(if *k < 0 { p.recip() } else { p })
}

/// `a = g^k` with `k` maximal. `a ≥ 2`.
fn decompose_integer(a: &Integer) -> Option<(Integer, u32)> {
    if u64::from(a.significant_bits()) > DECOMPOSE_BITS {
        return None;
    }
    let mut g = a.clone();
    let mut k = 1u32;
    if !g.is_perfect_power() {
        return Some((g, k));
    }
    let mut p = 2u32;
    while p < g.significant_bits() {
        let (root, rem) = g.clone().root_rem(Integer::new(), p);
        if rem == 0 {
            g = root;
            k *= p;
        } else {
            p = next_prime(p);
        }
    }
    Some((g, k))
}

fn next_prime(p: u32) -> u32 {
    let mut n = p + 1;
    while (2..n).take_while(|d| d * d <= n).any(|d| n % d == 0) {
        n += 1;
    }
    n
}

/// `q = g^k` with `g > 1` not a perfect power; `q ≠ 1`.
fn decompose_rational(q: &Q) -> Option<(Q, Integer)> {
    let split = |n: &Integer| -> Option<(Integer, u32)> {
        if *n == 1 {
            Some((Integer::from(1), 0))
        } else {
            decompose_integer(n)
        }
    };
    let (gn, kn) = split(q.numer())?;
    let (gd, kd) = split(q.denom())?;
    let k = gcd(kn, kd);
    let num = gn.pow(kn / k);
    let den = gd.pow(kd / k);
    let g = Q::from((num, den));
    if g > 1 {
        Some((g, Integer::from(k)))
    } else {
        Some((g.recip(), -Integer::from(k)))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
