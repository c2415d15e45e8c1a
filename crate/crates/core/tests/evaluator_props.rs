use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::Index;
use rug::ops::Pow;
use rug::Rational as Q;
use towerseq::enumerate::generate_weight_block;
use towerseq::eval::{decimal_digits, eval_ball, exact_rational, PrecisionPolicy, Real, Tolerance};
use towerseq::Tower;

fn blocks() -> &'static Vec<Vec<Tower>> {
    static BLOCKS: OnceLock<Vec<Vec<Tower>>> = OnceLock::new();
    BLOCKS.get_or_init(|| (0..=10).map(|w| if w < 2 { vec![] } else { generate_weight_block(w) }).collect())
}

fn tower() -> impl Strategy<Value = Tower> {
    (2usize..=10, any::<Index>()).prop_map(|(w, i)| i.get(&blocks()[w]).clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn refinement_stays_inside(t in tower()) {
        let policy = PrecisionPolicy::default();
        let coarse = eval_ball(&t, &Tolerance::pow10(20), &policy).unwrap();
        let fine = eval_ball(&t, &Tolerance::pow10(22), &policy).unwrap();
        prop_assert!(coarse.lo() <= *fine.mid() && *fine.mid() <= coarse.hi(), "{}", t);
        prop_assert!(*coarse.rad() <= 1e-20);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_values_lie_in_their_balls(t in tower()) {
        if let Some(v) = exact_rational(&t) {
            let b = eval_ball(&t, &Tolerance::pow10(60), &PrecisionPolicy::default()).unwrap();
            prop_assert!(b.contains(&v), "{} = {}", t, v);
        }
    }

    #[test]
    fn digits_are_stable(t in tower(), k in 1usize..40) {
        let low = PrecisionPolicy { start_digits: 64, cap_digits: 4096 };
        let high = PrecisionPolicy { start_digits: 128, cap_digits: 4096 };
        let v = Real::Expr(t);
        let short = decimal_digits(&v, k, &low).unwrap();
        let long = decimal_digits(&v, 2 * k, &high).unwrap();
        prop_assert_eq!(&short.integer, &long.integer);
        prop_assert!(long.fraction.starts_with(&short.fraction));
    }

    #[test]
    fn exact_digits_match_long_division(n in 1u32..1000, d in 1u32..1000, k in 1usize..30) {
        let t = Tower::parse(&format!("({n}/{d})")).unwrap();
        let got = decimal_digits(&Real::Expr(t), k, &PrecisionPolicy::default()).unwrap();
        let mut r = u64::from(n % d);
        let mut want = String::new();
        for _ in 0..k {
            r *= 10;
            want.push(char::from(b'0' + (r / u64::from(d)) as u8));
            r %= u64::from(d);
        }
        prop_assert_eq!(got.fraction, want);
        prop_assert_eq!(got.integer, (n / d).to_string());
        prop_assert!(got.exact);
    }
}

#[test]
fn two_to_the_root_two_matches_reference_digits() {
    // computed independently at 120 digits
    const REFERENCE: &str =
        "2.66514414269022518865029724987313984827421131371465949283597959336492044617870595486760918";
    let t = Tower::parse("(2/1)^[(2/1)^(1/2)]").unwrap();
    let b = eval_ball(&t, &Tolerance::pow10(50), &PrecisionPolicy::default()).unwrap();
    let reference = towerseq::decimal::parse_decimal(REFERENCE).unwrap();
    let err = reference - b.mid().to_rational().unwrap();
    assert!(err.abs() < Q::from((1, rug::Integer::from(10).pow(50u32))));
}
