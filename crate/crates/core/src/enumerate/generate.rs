//! Structural generation of every tower of a given weight, already in
//! enumeration order.

use crate::expr::{Atom, Rational, Tower};

/// Fractions of weight `w`, denominator ascending.
fn fractions(w: u32) -> impl Iterator<Item = Rational> {
    (1..w).map(move |den| Rational::small(w - den, den))
}

/// All atoms of weight exactly `w`, in enumeration order.
pub fn atoms_of_weight(w: u32) -> Vec<Atom> {
    let mut out: Vec<Atom> = fractions(w).map(Atom::Frac).collect();
    // base varies fastest, exponent slowest
    for we in 2..w.saturating_sub(1) {
        for e in fractions(we) {
            for b in fractions(w - we) {
                out.push(Atom::Pow(b, e.clone()));
            }
        }
    }
    for wt in 2..w.saturating_sub(3) {
        for t in fractions(wt) {
            for wm in 2..(w - wt - 1) {
                for m in fractions(wm) {
                    for b in fractions(w - wt - wm) {
                        out.push(Atom::PowPow(b, m.clone(), t.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Compositions `(w_1, .., w_k)` of `w` with every part at least 2, ordered
/// lexicographically by `(w_2, .., w_k)`.
fn compositions(w: u32, k: usize) -> Vec<Vec<u32>> {
    fn tails(budget: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            out.push(prefix.clone());
            return;
        }
        let reserve = 2 * (parts as u32 - 1);
        for p in 2..=budget.saturating_sub(reserve) {
            prefix.push(p);
            tails(budget - p, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if w < 2 * k as u32 {
        return out;
    }
    let mut tails_found = Vec::new();
    tails(w - 2, k - 1, &mut Vec::new(), &mut tails_found);
    for tail in tails_found {
        let first = w - tail.iter().sum::<u32>();
        let mut c = vec![first];
        c.extend(tail);
        out.push(c);
    }
    out
}

/// Every structurally distinct tower of weight `w`, in enumeration order,
/// before any deduplication.
pub fn generate_weight_block(w: u32) -> Vec<Tower> {
    assert!(w >= 2, "weights start at 2");
    let atoms: Vec<Vec<Atom>> = (0..=w).map(atoms_of_weight).collect();
    let mut out = Vec::new();
    for k in 1..=(w / 2) as usize {
        for comp in compositions(w, k) {
            let lists: Vec<&Vec<Atom>> = comp.iter().map(|&c| &atoms[c as usize]).collect();
            // odometer with a_1 as the fastest digit
            let mut idx = vec![0usize; k];
            'product: loop {
                out.push(
                    Tower::new(idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect())
                        .expect("k >= 1"),
                );
                for (pos, list) in lists.iter().enumerate() {
                    idx[pos] += 1;
                    if idx[pos] < list.len() {
                        continue 'product;
                    }
                    idx[pos] = 0;
                }
                break;
            }
        }
    }
    out
}
