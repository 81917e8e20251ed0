//! Randomized verification harness.
//!
//! Each trial draws a system from a per-trial generator derived from the
//! master seed, so trials are independent and reproducible one by one.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, RngCore};
use tropicost_core::correct_linear::{
    check_correct_linear, check_lemma_cycle, check_lemma_iterate, check_lemma_path, check_theorems,
    lemma_dev_violation, LinearAbstractionTriple,
};
use tropicost_core::longrun::long_run_cost;
use tropicost_core::partition_abstraction::{
    best_abstract_system, check_correct_abstraction, check_galois, lift_partition_indices,
};
use tropicost_core::transition_semantics::reachable_restrict;
use tropicost_core::{global_cost, CostDioid, TransitionSystem};
use tropicost_oracle::{
    closure_oracle, cycle_means_oracle, random_alpha, random_partition, random_system, trial_rng, Budget,
    RandomSystemSpec,
};

use crate::report::Verdict;

/// Families of checks the harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Suites {
    pub oracle: bool,
    pub partition: bool,
    pub linear: bool,
    pub lemmas: bool,
}

impl Suites {
    pub const ALL: Suites = Suites {
        oracle: true,
        partition: true,
        linear: true,
        lemmas: true,
    };
    pub const NONE: Suites = Suites {
        oracle: false,
        partition: false,
        linear: false,
        lemmas: false,
    };
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub dioid: Arc<CostDioid>,
    pub states: RangeInclusive<usize>,
    pub trials: u64,
    pub seed: u64,
    pub density: f64,
    pub kmax: usize,
    pub walk_budget: u64,
    pub suites: Suites,
}

impl VerifyConfig {
    pub fn new(dioid: Arc<CostDioid>, states: RangeInclusive<usize>, trials: u64, seed: u64) -> Self {
        VerifyConfig {
            dioid,
            states,
            trials,
            seed,
            density: 0.4,
            kmax: 4,
            walk_budget: Budget::from_env().limit(),
            suites: Suites {
                oracle: true,
                partition: true,
                linear: true,
                lemmas: false,
            },
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOutcome {
    pub verdicts: Vec<Verdict>,
    /// Text of the first failing system per check, with the check name as a header comment.
    pub counterexamples: Vec<String>,
}

impl VerifyOutcome {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(Verdict::holds)
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    fn record(&mut self, check: &str, asserted: bool, outcome: Option<bool>, witness: impl FnOnce() -> String) {
        let idx = match self.verdicts.iter().position(|v| v.check == check) {
            Some(i) => i,
            None => {
                self.verdicts.push(Verdict {
                    check: check.to_string(),
                    passed: 0,
                    failed: 0,
                    skipped: 0,
                    asserted,
                });
                self.verdicts.len() - 1
            }
        };
        let v = &mut self.verdicts[idx];
        match outcome {
            Some(true) => v.passed += 1,
            Some(false) => {
                v.failed += 1;
                if v.failed == 1 {
                    self.counterexamples.push(format!("# {check}\n{}", witness()));
                }
            }
            None => v.skipped += 1,
        }
    }
}

fn alpha_text(t: &LinearAbstractionTriple) -> String {
    t.alpha()
        .render_boolean()
        .lines()
        .map(|l| format!("# alpha1 {l}\n"))
        .collect()
}

fn oracle_checks(out: &mut VerifyOutcome, p: &TransitionSystem, cfg: &VerifyConfig) {
    let d = p.dioid();
    let budget = Budget::new(cfg.walk_budget);
    let closure = match (p.matrix().kleene_plus(), closure_oracle(p.matrix(), &budget)) {
        (Ok(analytic), Ok(walks)) => Some(
            walks
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, v)| analytic.get(i, j) == v)),
        ),
        _ => Some(false),
    };
    out.record("oracle closure", true, closure, || p.to_text());
    let reach = reachable_restrict(p).len();
    let budget = Budget::new(cfg.walk_budget);
    let rho = match (long_run_cost(p), cycle_means_oracle(p, reach, &budget)) {
        (Ok(a), Ok(b)) => Some(d.approx_eq(&a, &b)),
        _ => Some(false),
    };
    out.record("oracle long-run", true, rho, || p.to_text());
}

fn partition_checks(out: &mut VerifyOutcome, p: &TransitionSystem, rng: &mut impl RngCore) {
    let d = p.dioid().clone();
    let n = p.len();
    let blocks = rng.gen_range(1..=n);
    let image = random_partition(rng, n, blocks);
    let names: Vec<String> = (0..blocks).map(|b| format!("B{b}")).collect();
    let lift = lift_partition_indices(d.clone(), p.states(), &names, &image).expect("total map");
    let witness = || {
        let map: String = image
            .iter()
            .enumerate()
            .map(|(c, &a)| format!("# map {} -> {}\n", p.states()[c], names[a]))
            .collect();
        format!("{}{map}", p.to_text())
    };
    out.record("partition galois", true, Some(check_galois(&lift)), witness);
    let best = best_abstract_system(p, &lift).expect("same states");
    out.record(
        "partition correct",
        true,
        Some(check_correct_abstraction(p, &best, &lift).unwrap_or(false)),
        witness,
    );
    let nonzero: Vec<(usize, usize)> = (0..blocks)
        .flat_map(|a| (0..blocks).map(move |b| (a, b)))
        .filter(|&(a, b)| !d.is_zero(best.edge(a, b)))
        .collect();
    let minimal = if nonzero.is_empty() {
        None
    } else {
        let (a, b) = nonzero[rng.gen_range(0..nonzero.len())];
        let mut lowered = best.matrix().clone();
        lowered.set(a, b, d.zero());
        let worse = best.with_matrix(lowered).expect("same shape");
        Some(!check_correct_abstraction(p, &worse, &lift).unwrap_or(true))
    };
    out.record("partition minimal", true, minimal, witness);
    let gc = match (global_cost(p), global_cost(&best)) {
        (Ok(a), Ok(b)) => d.leq(&a, &b),
        _ => false,
    };
    out.record("partition gc", true, Some(gc), witness);
    let rho = match (long_run_cost(p), long_run_cost(&best)) {
        (Ok(a), Ok(b)) => d.approx_leq(&a, &b),
        _ => false,
    };
    out.record("partition rho", d.is_selective(), Some(rho), witness);
}

fn linear_checks(out: &mut VerifyOutcome, p: &TransitionSystem, cfg: &VerifyConfig, rng: &mut impl RngCore) {
    let d = p.dioid().clone();
    let rows = rng.gen_range(1..=p.len());
    let alpha = random_alpha(&d, rng, rows, p.len(), 0.3);
    let t = LinearAbstractionTriple::best_composite(p, alpha).expect("valid shapes");
    let witness = || format!("{}{}", p.to_text(), alpha_text(&t));
    out.record("linear correct", true, Some(check_correct_linear(&t)), witness);
    match check_theorems(&t) {
        Ok(r) => {
            out.record("linear gc", true, r.gc_holds, witness);
            out.record("linear rho", r.rho_asserted, Some(r.rho_holds), witness);
        }
        Err(_) => {
            out.record("linear gc", true, Some(false), witness);
            out.record("linear rho", d.is_selective(), Some(false), witness);
        }
    }
    if !cfg.suites.lemmas {
        return;
    }
    out.record("lemma dev", true, Some(lemma_dev_violation(&t).is_none()), witness);
    out.record("lemma iterate", true, Some(check_lemma_iterate(&t, cfg.kmax as u32)), witness);
    let selective = d.is_selective();
    let path = selective.then(|| check_lemma_path(&t, cfg.kmax).unwrap_or(false));
    out.record("lemma path", true, path, witness);
    let cycle = selective.then(|| check_lemma_cycle(&t, cfg.kmax).unwrap_or(false));
    out.record("lemma cycle", true, cycle, witness);
}

/// Runs every enabled suite on `cfg.trials` random systems.
pub fn run_verify(cfg: &VerifyConfig) -> VerifyOutcome {
    let mut out = VerifyOutcome::default();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let n = rng.gen_range(cfg.states.clone());
        let spec = RandomSystemSpec::new(cfg.dioid.clone(), n, cfg.density, rng.next_u64());
        let p = random_system(&spec).expect("valid spec");
        if cfg.suites.oracle {
            oracle_checks(&mut out, &p, cfg);
        }
        if cfg.suites.partition {
            partition_checks(&mut out, &p, &mut rng);
        }
        if cfg.suites.linear || cfg.suites.lemmas {
            linear_checks(&mut out, &p, cfg, &mut rng);
        }
    }
    out
}
