use rug::Float;
use towerseq::approx::{best_approx, density_profile, TargetSpec};
use towerseq::enumerate::{entries_up_to, EnumConfig};
use towerseq::eval::{eval_ball, PrecisionPolicy, Tolerance};

/// Independent sweep: high-precision distance of every entry.
fn sweep(target: &Float, max_weight: u32) -> (usize, String) {
    let policy = PrecisionPolicy::default();
    let mut best: Option<(Float, usize, String)> = None;
    for e in entries_up_to(max_weight, EnumConfig::default()).unwrap() {
        let b = eval_ball(&e.expr, &Tolerance::pow10(60), &policy).unwrap();
        let d = Float::with_val(400, b.mid() - target).abs();
        if best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
            best = Some((d, e.index, e.expr.render()));
        }
    }
    let (_, i, s) = best.unwrap();
    (i, s)
}

fn reference(name: &str) -> Float {
    use rug::float::Constant;
    match name {
        "e" => Float::with_val(400, 1).exp(),
        "pi" => Float::with_val(400, Constant::Pi),
        "ln2" => Float::with_val(400, Constant::Log2),
        _ => Float::with_val(400, 2).sqrt(),
    }
}

#[test]
fn exhaustive_search_matches_sweep() {
    for name in ["e", "pi", "ln2"] {
        let target = TargetSpec::named(name).unwrap();
        for w in [6, 8, 10] {
            let got = best_approx(&target, w, EnumConfig::default()).unwrap();
            let (i, s) = sweep(&reference(name), w);
            assert_eq!((got.index, got.expr.render()), (i, s), "{name} at {w}");
        }
    }
}

#[test]
fn profiles_never_get_worse() {
    for name in ["e", "pi", "ln2", "sqrt2"] {
        let target = TargetSpec::named(name).unwrap();
        let weights: Vec<u32> = (2..=11).collect();
        let p = density_profile(&target, &weights, EnumConfig::default()).unwrap();
        assert_eq!(p.rows.len(), weights.len());
        assert!(p.is_nonincreasing(), "{name}");
    }
}

#[test]
fn reported_error_bounds_the_true_error() {
    for name in ["e", "pi", "ln2", "sqrt2"] {
        let target = TargetSpec::named(name).unwrap();
        let a = best_approx(&target, 10, EnumConfig::default()).unwrap();
        let b = eval_ball(&a.expr, &Tolerance::pow10(80), &PrecisionPolicy::default()).unwrap();
        let true_err = Float::with_val(400, b.mid() - &reference(name)).abs();
        assert!(true_err <= a.error, "{name}");
    }
}

#[test]
fn pi_at_weight_thirteen() {
    let target = TargetSpec::named("pi").unwrap();
    let p = density_profile(&target, &[5, 10, 13], EnumConfig::default()).unwrap();
    let (_, best) = &p.rows[2];
    assert!(best.error <= 0.022, "{} {}", best.expr, best.error);
}
