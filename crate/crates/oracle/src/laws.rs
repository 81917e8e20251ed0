//! Cost dioid laws on sampled tuples.

use rand::Rng;
use tropicost_core::{CostDioid, CostValue, DioidKind, Extended, VecCost};

use crate::random::{random_value, CostSampler};

/// A carrier element, with the distinguished elements drawn often.
pub fn random_element(d: &CostDioid, rng: &mut impl Rng) -> CostValue {
    match rng.gen_range(0..10) {
        0 => d.zero(),
        1 => d.top(),
        2 => d.unit(),
        3 => match d.kind() {
            DioidKind::MinMax | DioidKind::MaxMin | DioidKind::MaxPlus | DioidKind::MinPlus => {
                if rng.gen_bool(0.5) {
                    CostValue::Scalar(Extended::PosInf)
                } else {
                    CostValue::Scalar(Extended::NegInf)
                }
            }
            DioidKind::MaxTimes => CostValue::Scalar(Extended::PosInf),
            DioidKind::MinPlusVec(_) => CostValue::Vector(VecCost::Infinite),
            _ => random_value(d, &CostSampler::default_for(d.kind()), rng),
        },
        _ => random_value(d, &CostSampler::default_for(d.kind()), rng),
    }
}

/// Checks one tuple against the laws; returns the name of the first law that fails.
///
/// Laws: ⊕ commutative, associative, idempotent with neutral ⊥ and
/// absorbing ⊤; ⊗ commutative, associative with neutral e and absorbing ⊥;
/// ⊗ distributes over ⊕; ⊕ and ⊗ preserve the order; the nth power is a
/// ⊕-morphism; the nth root is the unique solution of `xⁿ = q`; flagged
/// selective dioids have `a ⊕ b ∈ {a, b}`.
pub fn check_laws(d: &CostDioid, a: &CostValue, b: &CostValue, c: &CostValue, n: u32) -> Result<(), &'static str> {
    let plus = |x: &CostValue, y: &CostValue| d.oplus(x, y);
    let times = |x: &CostValue, y: &CostValue| d.otimes(x, y);
    let check = |ok: bool, law: &'static str| if ok { Ok(()) } else { Err(law) };

    check(plus(a, b) == plus(b, a), "oplus commutative")?;
    check(plus(&plus(a, b), c) == plus(a, &plus(b, c)), "oplus associative")?;
    check(plus(a, a) == *a, "oplus idempotent")?;
    check(plus(a, &d.zero()) == *a, "bot neutral for oplus")?;
    check(plus(a, &d.top()) == d.top(), "top absorbing for oplus")?;
    check(times(a, b) == times(b, a), "otimes commutative")?;
    check(times(&times(a, b), c) == times(a, &times(b, c)), "otimes associative")?;
    check(times(a, &d.unit()) == *a, "e neutral for otimes")?;
    check(times(a, &d.zero()) == d.zero(), "bot absorbing for otimes")?;
    check(
        times(a, &plus(b, c)) == plus(&times(a, b), &times(a, c)),
        "otimes distributes over oplus",
    )?;
    check(d.leq(&d.zero(), a) && d.leq(a, &d.top()), "bot least, top greatest")?;
    if d.leq(a, b) {
        check(d.leq(&plus(a, c), &plus(b, c)), "oplus preserves order")?;
        check(d.leq(&times(a, c), &times(b, c)), "otimes preserves order")?;
    }
    check(
        d.pow(&plus(a, b), n) == plus(&d.pow(a, n), &d.pow(b, n)),
        "nth power is an oplus-morphism",
    )?;
    let root = d.nth_root(a, n).map_err(|_| "nth root defined")?;
    check(d.approx_eq(&d.pow(&root, n), a), "root to the nth gives back q")?;
    let back = d.nth_root(&d.pow(a, n), n).map_err(|_| "nth root defined")?;
    check(d.approx_eq(&back, a), "root of the nth power gives back a")?;
    if d.is_selective() {
        let s = plus(a, b);
        check(s == *a || s == *b, "selective oplus returns an argument")?;
    }
    Ok(())
}

/// Whether the sampled pairs already contain a non-selective witness.
pub fn is_non_selective_witness(d: &CostDioid, a: &CostValue, b: &CostValue) -> bool {
    let s = d.oplus(a, b);
    s != *a && s != *b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::trial_rng;

    #[test]
    fn laws_hold_on_samples() {
        let universe: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let dioids = [
            CostDioid::new(DioidKind::MinMax, None).unwrap(),
            CostDioid::new(DioidKind::MaxMin, None).unwrap(),
            CostDioid::new(DioidKind::CapCup, Some(universe.clone())).unwrap(),
            CostDioid::new(DioidKind::CupCap, Some(universe)).unwrap(),
            CostDioid::new(DioidKind::MinPlusVec(2), None).unwrap(),
            CostDioid::new(DioidKind::MaxTimes, None).unwrap(),
            CostDioid::maxplus(),
            CostDioid::minplus(),
        ];
        let mut rng = trial_rng(11, 0);
        for d in &dioids {
            for _ in 0..300 {
                let (a, b, c) = (random_element(d, &mut rng), random_element(d, &mut rng), random_element(d, &mut rng));
                let n = rng.gen_range(1..=5);
                assert_eq!(check_laws(d, &a, &b, &c, n), Ok(()), "{} on {a:?} {b:?} {c:?} n={n}", d.kind());
            }
        }
    }

    #[test]
    fn set_dioid_is_not_selective() {
        let universe: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let d = CostDioid::new(DioidKind::CupCap, Some(universe)).unwrap();
        assert!(is_non_selective_witness(&d, &CostValue::Set(1), &CostValue::Set(2)));
        assert!(!is_non_selective_witness(&CostDioid::maxplus(), &CostValue::int(1), &CostValue::int(2)));
    }
}
