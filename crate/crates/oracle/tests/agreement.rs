use std::sync::Arc;

use rand::Rng;
use tropicost_core::longrun::long_run_cost;
use tropicost_core::transition_semantics::reachable_restrict;
use tropicost_core::{CostDioid, CostMatrix, CostValue, DioidKind, TransitionSystem};
use tropicost_oracle::{
    boolean_vectors, closure_oracle, cycle_means_oracle, greatest_subsolution, power_oracle, random_element,
    random_system, simple_cycle_means, trial_rng, Budget, ExplicitMap, RandomSystemSpec,
};

fn universe(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("u{i}")).collect()
}

fn all_dioids() -> Vec<Arc<CostDioid>> {
    [
        CostDioid::new(DioidKind::MinMax, None),
        CostDioid::new(DioidKind::MaxMin, None),
        CostDioid::new(DioidKind::CapCup, Some(universe(3))),
        CostDioid::new(DioidKind::CupCap, Some(universe(3))),
        CostDioid::new(DioidKind::MinPlusVec(2), None),
        CostDioid::new(DioidKind::MaxTimes, None),
        CostDioid::new(DioidKind::MaxPlus, None),
        CostDioid::new(DioidKind::MinPlus, None),
    ]
    .into_iter()
    .map(|d| Arc::new(d.unwrap()))
    .collect()
}

fn systems(d: &Arc<CostDioid>, count: u64, max_states: usize) -> impl Iterator<Item = TransitionSystem> + '_ {
    (0..count).map(move |seed| {
        let mut rng = trial_rng(seed, 99);
        let n = rng.gen_range(1..=max_states);
        let density = rng.gen_range(0.2..0.7);
        random_system(&RandomSystemSpec::new(d.clone(), n, density, seed)).unwrap()
    })
}

#[test]
fn closure_matches_walk_enumeration() {
    let budget = Budget::new(u64::MAX);
    for d in all_dioids() {
        for p in systems(&d, 120, 5) {
            let analytic = p.matrix().kleene_plus().unwrap();
            let oracle = closure_oracle(p.matrix(), &budget).unwrap();
            for (i, row) in oracle.iter().enumerate() {
                for (j, want) in row.iter().enumerate() {
                    assert_eq!(analytic.get(i, j), want, "{} ({i},{j})\n{}", d.kind(), p.to_text());
                }
            }
        }
    }
}

#[test]
fn powers_match_walks_of_fixed_length() {
    let budget = Budget::new(u64::MAX);
    for d in all_dioids() {
        for p in systems(&d, 40, 4) {
            for k in 1..=4 {
                let analytic = p.matrix().power(k).unwrap();
                let oracle = power_oracle(p.matrix(), k as usize, &budget).unwrap();
                for (i, row) in oracle.iter().enumerate() {
                    for (j, want) in row.iter().enumerate() {
                        assert_eq!(analytic.get(i, j), want, "{} k={k}", d.kind());
                    }
                }
            }
        }
    }
}

#[test]
fn long_run_cost_matches_cycle_means() {
    let budget = Budget::new(u64::MAX);
    for d in all_dioids() {
        for p in systems(&d, 120, 5) {
            let reach = reachable_restrict(&p).len();
            let analytic = long_run_cost(&p).unwrap();
            let oracle = cycle_means_oracle(&p, reach, &budget).unwrap();
            assert!(d.approx_eq(&analytic, &oracle), "{}: {analytic:?} vs {oracle:?}\n{}", d.kind(), p.to_text());
        }
    }
}

#[test]
fn selective_long_run_cost_is_a_simple_cycle_mean() {
    for d in all_dioids().into_iter().filter(|d| d.is_totally_ordered()) {
        for p in systems(&d, 120, 6) {
            let analytic = long_run_cost(&p).unwrap();
            let simple = simple_cycle_means(&p).unwrap();
            assert!(d.approx_eq(&analytic, &simple), "{}", d.kind());
        }
    }
}

#[test]
fn unreachable_states_do_not_change_long_run_cost() {
    for d in all_dioids() {
        for p in systems(&d, 60, 4) {
            let n = p.len();
            let mut m = CostMatrix::zero(d.clone(), n + 1, n + 1);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, p.edge(i, j).clone());
                }
                m.set(n, i, d.unit());
            }
            m.set(n, n, d.top());
            let mut states = p.states().to_vec();
            states.push("extra".into());
            let bigger = TransitionSystem::new(states, m, p.init().to_vec(), p.finals().to_vec()).unwrap();
            assert_eq!(long_run_cost(&bigger).unwrap(), long_run_cost(&p).unwrap(), "{}", d.kind());
        }
    }
}

#[test]
fn long_run_cost_is_monotone() {
    for d in all_dioids() {
        for (idx, p) in systems(&d, 60, 4).enumerate() {
            let mut rng = trial_rng(idx as u64, 5);
            let n = p.len();
            let mut m = p.matrix().clone();
            for i in 0..n {
                for j in 0..n {
                    if rng.gen_bool(0.3) {
                        let bump = d.oplus(m.get(i, j), &random_element(&d, &mut rng));
                        m.set(i, j, bump);
                    }
                }
            }
            let q = p.with_matrix(m).unwrap();
            let (lo, hi) = (long_run_cost(&p).unwrap(), long_run_cost(&q).unwrap());
            assert!(d.approx_leq(&lo, &hi), "{}: {lo:?} > {hi:?}", d.kind());
        }
    }
}

#[test]
fn residual_is_the_greatest_subsolution_on_sets() {
    for width in 1..=4 {
        for kind in [DioidKind::CupCap, DioidKind::CapCup] {
            let d = CostDioid::new(kind, Some(universe(width))).unwrap();
            let domain: Vec<CostValue> = (0..1u64 << width).map(CostValue::Set).collect();
            for a in &domain {
                let f = ExplicitMap::tabulate(domain.clone(), |x| d.otimes(a, x));
                for b in &domain {
                    let oracle = greatest_subsolution(&f, b, |x, y| d.leq(x, y), |x, y| d.oplus(x, y), d.zero());
                    assert_eq!(d.residual(a, b), oracle, "{kind} a={a:?} b={b:?}");
                }
            }
        }
    }
}

#[test]
fn residual_is_greatest_on_numeric_samples() {
    let mut rng = trial_rng(17, 3);
    for d in all_dioids().into_iter().filter(|d| d.kind().is_scalar() || matches!(d.kind(), DioidKind::MinPlusVec(_))) {
        for _ in 0..500 {
            let (a, b, x) = (
                random_element(&d, &mut rng),
                random_element(&d, &mut rng),
                random_element(&d, &mut rng),
            );
            let r = d.residual(&a, &b);
            assert!(d.leq(&d.otimes(&a, &r), &b), "{}: a ⊗ (a\\b) ≤ b for {a:?} {b:?}", d.kind());
            if d.leq(&d.otimes(&a, &x), &b) {
                assert!(d.leq(&x, &r), "{}: subsolution {x:?} above residual {r:?}", d.kind());
            }
        }
    }
}

#[test]
fn boolean_vector_enumeration() {
    let d = Arc::new(CostDioid::maxplus());
    let all = boolean_vectors(&d, 4);
    assert_eq!(all.len(), 16);
    assert_eq!(all[5].render_boolean(), "(e,.,e,.)");
}

#[test]
fn budget_from_environment() {
    std::env::set_var(tropicost_oracle::WALK_BUDGET_ENV, "12");
    assert_eq!(Budget::from_env().limit(), 12);
    std::env::set_var(tropicost_oracle::WALK_BUDGET_ENV, "junk");
    assert_eq!(Budget::from_env().limit(), tropicost_oracle::DEFAULT_WALK_BUDGET);
    std::env::remove_var(tropicost_oracle::WALK_BUDGET_ENV);
}
