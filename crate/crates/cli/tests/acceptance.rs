//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use tropicost_cli::verify::{run_verify, Suites, VerifyConfig, VerifyOutcome};
use tropicost_core::galois_lift::{check_linearizability_counterexample, check_residuated_pair, GaloisLift};
use tropicost_core::longrun::{average_path_cost, long_run_cost};
use tropicost_core::{parse_system, CostDioid, CostValue, CostVector, DioidKind};
use tropicost_oracle::{
    boolean_vectors, check_laws, enumerate_paths, greatest_subsolution, is_non_selective_witness, random_element,
    trial_rng, Budget, ExplicitMap,
};

const LRC: &str = include_str!("../examples/lrc.tsys");

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn zero_failures(out: &VerifyOutcome, checks: &[&str]) -> Result<String, String> {
    let mut summary = Vec::new();
    for name in checks {
        let v = out.verdict(name).ok_or_else(|| format!("check `{name}` did not run"))?;
        if v.failed > 0 || v.skipped > 0 {
            return Err(format!(
                "{name}: {} failed, {} skipped\n{}",
                v.failed,
                v.skipped,
                out.counterexamples.join("\n")
            ));
        }
        summary.push(format!("{name} {}", v.passed));
    }
    Ok(summary.join(", "))
}

fn golden_long_run() -> Check {
    let start = Instant::now();
    let p = parse_system(LRC).map_err(|e| e.to_string())?;
    let d = p.dioid().clone();
    let rho = long_run_cost(&p).map_err(|e| e.to_string())?;
    ensure(rho == CostValue::int(4), format!("rho = {}", d.format_value(&rho)))?;
    let avg = average_path_cost(&p, &["a", "b", "c"]).map_err(|e| e.to_string())?;
    ensure(avg == CostValue::ratio(11, 2), format!("avg(abc) = {}", d.format_value(&avg)))?;
    let budget = Budget::new(u64::MAX);
    let mut means: Vec<CostValue> = Vec::new();
    for s in 0..p.len() {
        for (walk, cost) in enumerate_paths(&p, s, s, p.len(), &budget).map_err(|e| e.to_string())? {
            let mean = d.nth_root(&cost, (walk.len() - 1) as u32).map_err(|e| e.to_string())?;
            if !means.contains(&mean) {
                means.push(mean);
            }
        }
    }
    let mut want = vec![CostValue::int(4), CostValue::ratio(7, 2), CostValue::int(2)];
    means.sort_by(|a, b| d.leq(a, b).cmp(&d.leq(b, a)));
    want.sort_by(|a, b| d.leq(a, b).cmp(&d.leq(b, a)));
    ensure(means == want, format!("cycle means {means:?}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("rho = 4, avg(abc) = 11/2, cycle means 4 7/2 2 in {:.2?}", start.elapsed()))
}

fn golden_matrix() -> Check {
    let g = GaloisLift::even_intervals(Arc::new(CostDioid::maxplus()), 2).map_err(|e| e.to_string())?;
    let lattice = g.abstract_lattice();
    let rows: Vec<&str> = lattice.join_irreducibles().iter().map(|&j| lattice.name(j)).collect();
    ensure(rows == ["[-2]", "[0]", "[2]"], format!("rows {rows:?}"))?;
    ensure(g.concrete_atoms() == ["-2", "-1", "0", "1", "2"], format!("columns {:?}", g.concrete_atoms()))?;
    let rendered = g.alpha1().render_boolean();
    ensure(rendered == "e e . . .\n. e e e .\n. . . e e\n", rendered.clone())?;
    Ok("3x5 alpha1 matches bit for bit".into())
}

fn projection_example() -> Check {
    let d = Arc::new(CostDioid::maxplus());
    let g = GaloisLift::even_intervals(d.clone(), 2).map_err(|e| e.to_string())?;
    let x = CostVector::indicator(d.clone(), 3, [0, 2]);
    let y = g.project_pi(&x);
    ensure(y == CostVector::indicator(d, 3, [0, 1, 2]), y.render_boolean())?;
    Ok(format!("pi{} = {}", x.render_boolean(), y.render_boolean()))
}

fn nonlinearity() -> Check {
    let r = check_linearizability_counterexample();
    let (sum, joint) = r.mismatch_positions();
    ensure(sum == [2, 5] && joint == [7], format!("positions {sum:?} vs {joint:?}"))?;
    ensure(r.partition_mismatch(), "partition lift is additive")?;
    ensure(r.lifted_agrees(), format!("pi . alpha1 gives {}", r.lifted_joint.render_boolean()))?;
    ensure(r.lifted_joint.render_boolean() == "(e,e,e)", "joint is not [-2,2]")?;
    Ok(format!(
        "{} != {}; pi . alpha1 gives [-2,2]",
        r.partition_sum.render_boolean(),
        r.partition_joint.render_boolean()
    ))
}

fn partition_theorems() -> Check {
    let start = Instant::now();
    let mut lines = Vec::new();
    for d in [CostDioid::maxplus(), CostDioid::minplus()] {
        let kind = d.kind();
        let mut cfg = VerifyConfig::new(Arc::new(d), 3..=6, 1000, 5);
        cfg.suites = Suites {
            partition: true,
            ..Suites::NONE
        };
        let out = run_verify(&cfg);
        let s = zero_failures(&out, &["partition correct", "partition gc", "partition rho"])?;
        lines.push(format!("{kind}: {s}"));
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{} in {:.1?}", lines.join("; "), start.elapsed()))
}

fn linear_theorems() -> Check {
    let start = Instant::now();
    let mut cfg = VerifyConfig::new(Arc::new(CostDioid::maxplus()), 3..=6, 1000, 6);
    cfg.suites = Suites {
        linear: true,
        lemmas: true,
        ..Suites::NONE
    };
    cfg.kmax = 4;
    let out = run_verify(&cfg);
    let s = zero_failures(
        &out,
        &[
            "linear correct",
            "linear gc",
            "linear rho",
            "lemma dev",
            "lemma iterate",
            "lemma path",
            "lemma cycle",
        ],
    )?;
    within(start.elapsed(), Duration::from_secs(180))?;
    Ok(format!("maxplus: {s} in {:.1?}", start.elapsed()))
}

fn oracle_equivalence() -> Check {
    let mut lines = Vec::new();
    for kind in [
        DioidKind::MinMax,
        DioidKind::MaxMin,
        DioidKind::MinPlusVec(2),
        DioidKind::MaxTimes,
        DioidKind::MaxPlus,
        DioidKind::MinPlus,
    ] {
        let d = CostDioid::new(kind, None).map_err(|e| e.to_string())?;
        let mut cfg = VerifyConfig::new(Arc::new(d), 1..=5, 1000, 7);
        cfg.walk_budget = u64::MAX;
        cfg.suites = Suites {
            oracle: true,
            ..Suites::NONE
        };
        let out = run_verify(&cfg);
        zero_failures(&out, &["oracle closure", "oracle long-run"]).map_err(|e| format!("{kind}: {e}"))?;
        lines.push(kind.to_string());
    }
    Ok(format!("1000 systems each over {}", lines.join(", ")))
}

fn residuation() -> Check {
    let d = Arc::new(CostDioid::maxplus());
    let g = GaloisLift::even_intervals(d.clone(), 2).map_err(|e| e.to_string())?;
    let lattice = g.abstract_lattice();
    let concrete = boolean_vectors(&d, g.concrete_dim());
    let abstract_elems: Vec<CostVector> = (0..lattice.len()).map(|y| lattice.encode(&d, y)).collect();
    ensure(concrete.len() == 32 && abstract_elems.len() == 7, "unexpected domain sizes")?;
    let f = |x: &CostVector| g.project_pi(&g.apply_alpha1(x).expect("shape"));
    let mut checked = 0;
    for x in &concrete {
        let fx = f(x);
        ensure(abstract_elems.contains(&fx), format!("pi . alpha1 {} not in lattice", x.render_boolean()))?;
        for y in &abstract_elems {
            let gy = g.apply_gamma1(y);
            ensure(
                fx.leq(y) == x.leq(&gy),
                format!("Galois law fails at {} / {}", x.render_boolean(), y.render_boolean()),
            )?;
            checked += 1;
        }
    }
    let table = ExplicitMap::tabulate(concrete.clone(), f);
    for y in &abstract_elems {
        let oracle = greatest_subsolution(
            &table,
            y,
            |a, b| a.leq(b),
            |a, b| a.oplus(b).expect("shape"),
            CostVector::zero(d.clone(), g.concrete_dim()),
        );
        ensure(oracle == g.apply_gamma1(y), format!("gamma1 {} differs from oracle", y.render_boolean()))?;
    }
    let boxes = boolean_vectors(&d, g.abstract_dim());
    for x in &boxes {
        let px = g.project_pi(x);
        ensure(x.leq(&px), "pi not extensive")?;
        ensure(g.project_pi(&px) == px, "pi not idempotent")?;
        ensure(abstract_elems.contains(&px), "pi leaves the lattice")?;
        for z in &boxes {
            if x.leq(z) {
                ensure(px.leq(&g.project_pi(z)), "pi not monotone")?;
            }
        }
    }
    ensure(check_residuated_pair(&g).holds(), "check_residuated_pair fails")?;
    let mut residuals = 0;
    for width in 1..=4 {
        let universe: Vec<String> = (0..width).map(|i| format!("u{i}")).collect();
        for kind in [DioidKind::CupCap, DioidKind::CapCup] {
            let s = CostDioid::new(kind, Some(universe.clone())).map_err(|e| e.to_string())?;
            let domain: Vec<CostValue> = (0..1u64 << width).map(CostValue::Set).collect();
            for a in &domain {
                let f = ExplicitMap::tabulate(domain.clone(), |x| s.otimes(a, x));
                for b in &domain {
                    let want = greatest_subsolution(&f, b, |x, y| s.leq(x, y), |x, y| s.oplus(x, y), s.zero());
                    ensure(s.residual(a, b) == want, format!("{kind} residual {a:?} {b:?}"))?;
                    residuals += 1;
                }
            }
        }
    }
    Ok(format!("{checked} Galois pairs, 7 gamma1 subsolutions, {residuals} set residuals"))
}

fn algebra_laws() -> Check {
    let universe: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let mut lines = Vec::new();
    for kind in [
        DioidKind::MinMax,
        DioidKind::MaxMin,
        DioidKind::CapCup,
        DioidKind::CupCap,
        DioidKind::MinPlusVec(2),
        DioidKind::MaxTimes,
        DioidKind::MaxPlus,
        DioidKind::MinPlus,
    ] {
        let d = CostDioid::new(kind, kind.needs_universe().then(|| universe.clone())).map_err(|e| e.to_string())?;
        let mut rng = trial_rng(9, kind.to_string().len() as u64);
        let mut witness = false;
        for _ in 0..10_000 {
            let (a, b, c) = (random_element(&d, &mut rng), random_element(&d, &mut rng), random_element(&d, &mut rng));
            let n = rng.gen_range(1..=5);
            check_laws(&d, &a, &b, &c, n).map_err(|law| format!("{kind}: {law} on {a:?} {b:?} {c:?} n={n}"))?;
            witness |= is_non_selective_witness(&d, &a, &b);
        }
        let expect_witness = matches!(kind, DioidKind::CapCup | DioidKind::CupCap | DioidKind::MinPlusVec(_));
        if d.is_selective() {
            ensure(!witness, format!("{kind} flagged selective but a witness was sampled"))?;
        }
        ensure(!expect_witness || witness, format!("{kind}: no non-selective witness sampled"))?;
        lines.push(kind.to_string());
    }
    Ok(format!("10^4 tuples each over {}", lines.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("long-run golden example", golden_long_run),
        ("even-interval alpha1 matrix", golden_matrix),
        ("projection to the top element", projection_example),
        ("non-linearity counterexample", nonlinearity),
        ("partition theorems", partition_theorems),
        ("correct linear theorems and lemmas", linear_theorems),
        ("oracle equivalence", oracle_equivalence),
        ("residuation laws", residuation),
        ("algebra laws", algebra_laws),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
