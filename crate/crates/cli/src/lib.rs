//! `tropicost` command line: global and long-run costs of weighted transition
//! systems, partition abstractions, lifted Galois connections and the
//! randomized verification harness.

pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use tropicost_core::galois_lift::{
    check_linearizability_counterexample, check_residuated_pair, find_linearizability_counterexample,
    linearizability_check, parse_lattice_file, GaloisLift,
};
use tropicost_core::longrun::long_run_cost;
use tropicost_core::partition_abstraction::{
    best_abstract_system, find_abstraction_violation, lift_partition, parse_partition,
};
use tropicost_core::transition_semantics::{parse_system_with, reachable_restrict, ParseOptions};
use tropicost_core::{global_cost, CostDioid, CostMatrix, DioidKind, TransitionSystem};
use tropicost_oracle::{cycle_means_oracle, Budget};

use report::{AnalysisReport, InputDigest, Verdict};
use verify::{run_verify, Suites, VerifyConfig};

/// Exit status for success and passing checks.
pub const EXIT_OK: i32 = 0;
/// Exit status when a check fails; the report carries the counterexample.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for usage, file and parse errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tropicost", version, about = "Cost analysis of weighted transition systems over cost dioids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Global cost: ⊕ of closure entries from initial to final states.
    Global {
        file: String,
        /// ⊕-merge repeated edges instead of rejecting them.
        #[arg(long)]
        merge_edges: bool,
        #[arg(long)]
        json: bool,
    },
    /// Long-run cost: worst average cost per transition over cycles.
    Longrun {
        file: String,
        /// Also enumerate closed walks and require the same value.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        merge_edges: bool,
        #[arg(long)]
        json: bool,
    },
    /// Best abstraction of a system under a partition of its states.
    Abstract {
        file: String,
        /// File of `map CONCRETE -> ABSTRACT` lines.
        #[arg(long)]
        partition: String,
        /// Check correctness of the abstract system (the best one, or `--against`).
        #[arg(long)]
        check: bool,
        /// Candidate abstract system to check instead of the best one.
        #[arg(long, requires = "check")]
        against: Option<String>,
        #[arg(long, conflicts_with = "global")]
        longrun: bool,
        #[arg(long)]
        global: bool,
        #[arg(long)]
        json: bool,
    },
    /// Lifted Galois connections between finite lattices.
    Galois {
        #[command(subcommand)]
        lattice: LatticeSource,
    },
    /// Randomized checks of the analyses against oracles and theorems.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GaloisFlags {
    /// Print the α₁ matrix.
    #[arg(long)]
    show_matrix: bool,
    /// Check the residuated pair and search for a non-additive pair of atoms.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum LatticeSource {
    /// Even intervals over {-n..n} abstracting subsets of {-n..n}.
    EvenIntervals {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        flags: GaloisFlags,
    },
    /// A lattice file with `element`, `cover` and `alpha` lines.
    File {
        path: String,
        #[command(flatten)]
        flags: GaloisFlags,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    dioid: String,
    /// Comma-separated universe for set dioids (default: three elements).
    #[arg(long)]
    universe: Option<String>,
    #[arg(long, default_value_t = 5)]
    states: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.4)]
    density: f64,
    /// Also check the lemmas behind the correct-linear theorems.
    #[arg(long)]
    lemmas: bool,
    #[arg(long)]
    json: bool,
}

/// What a run printed and returned.
#[derive(Debug, Default)]
pub struct Outcome {
    pub status: i32,
    pub report: Option<AnalysisReport>,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

struct Ctx {
    report: AnalysisReport,
    text: String,
    json: bool,
    failed: bool,
}

impl Ctx {
    fn new(subcommand: &str, json: bool) -> Self {
        Ctx {
            report: AnalysisReport::new(subcommand),
            text: String::new(),
            json,
            failed: false,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn read(&mut self, path: &str) -> Result<String, Failure> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read `{path}`"))?;
        self.report.inputs.push(InputDigest::of(path, &bytes));
        Ok(String::from_utf8(bytes).with_context(|| format!("`{path}` is not UTF-8"))?)
    }

    fn system(&mut self, path: &str, merge_edges: bool) -> Result<TransitionSystem, Failure> {
        let text = self.read(path)?;
        let parsed = parse_system_with(&text, ParseOptions { merge_edges }).with_context(|| format!("in `{path}`"))?;
        for w in parsed.warnings {
            self.report.notes.push(format!("{path}: {w}"));
        }
        Ok(parsed.system)
    }

    fn verdict(&mut self, v: Verdict) {
        if !v.holds() {
            self.failed = true;
        }
        self.report.verdicts.push(v);
    }
}

fn matrix_strings(m: &CostMatrix) -> Vec<Vec<String>> {
    let d = m.dioid();
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| d.format_value(m.get(r, c))).collect())
        .collect()
}

fn cmd_global(ctx: &mut Ctx, file: &str, merge_edges: bool) -> Result<(), Failure> {
    let p = ctx.system(file, merge_edges)?;
    let gc = global_cost(&p)?;
    let shown = p.dioid().format_value(&gc);
    ctx.line(format!("gc = {shown}"));
    ctx.report.value("gc", shown);
    Ok(())
}

fn cmd_longrun(ctx: &mut Ctx, file: &str, oracle: bool, merge_edges: bool) -> Result<(), Failure> {
    let p = ctx.system(file, merge_edges)?;
    let d = p.dioid().clone();
    let rho = long_run_cost(&p)?;
    let shown = d.format_value(&rho);
    ctx.line(format!("rho = {shown}"));
    ctx.report.value("rho", shown);
    if oracle {
        let reach = reachable_restrict(&p).len();
        let by_walks = cycle_means_oracle(&p, reach, &Budget::from_env()).map_err(|e| anyhow!(e))?;
        let shown = d.format_value(&by_walks);
        ctx.line(format!("rho (closed walks) = {shown}"));
        ctx.report.value("rho_oracle", shown);
        let agree = d.approx_eq(&rho, &by_walks);
        ctx.line(format!("agree = {agree}"));
        ctx.verdict(Verdict::single("rho equals closed-walk enumeration", agree));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_abstract(
    ctx: &mut Ctx,
    file: &str,
    partition: &str,
    check: bool,
    against: Option<&str>,
    longrun: bool,
    global: bool,
) -> Result<(), Failure> {
    let p = ctx.system(file, false)?;
    let map_text = ctx.read(partition)?;
    let (abstract_states, pairs) = parse_partition(&map_text).with_context(|| format!("in `{partition}`"))?;
    let lift = lift_partition(p.dioid().clone(), p.states(), &abstract_states, &pairs)?;
    let best = best_abstract_system(&p, &lift)?;
    let p_sharp = match against {
        Some(path) => ctx.system(path, false)?,
        None => best.clone(),
    };
    ctx.line("abstract system:");
    let text = p_sharp.to_text();
    ctx.text.push_str(&text);
    ctx.report.value("abstract_system", text);
    ctx.report.matrices.insert("alpha".into(), matrix_strings(lift.alpha()));
    ctx.report.matrices.insert("abstract".into(), matrix_strings(p_sharp.matrix()));

    let d = p.dioid().clone();
    let (want_gc, want_rho) = match (global, longrun) {
        (false, false) => (true, true),
        flags => flags,
    };
    if want_gc {
        let (a, b) = (global_cost(&p)?, global_cost(&p_sharp)?);
        let holds = d.leq(&a, &b);
        ctx.line(format!("gc(P) = {}", d.format_value(&a)));
        ctx.line(format!("gc(P#) = {}", d.format_value(&b)));
        ctx.line(format!("gc(P) <= gc(P#): {holds}"));
        ctx.report.value("gc", d.format_value(&a));
        ctx.report.value("gc_abstract", d.format_value(&b));
        ctx.verdict(Verdict::single("gc(P) <= gc(P#)", holds));
    }
    if want_rho {
        let (a, b) = (long_run_cost(&p)?, long_run_cost(&p_sharp)?);
        let holds = d.approx_leq(&a, &b);
        ctx.line(format!("rho(P) = {}", d.format_value(&a)));
        ctx.line(format!("rho(P#) = {}", d.format_value(&b)));
        ctx.line(format!("rho(P) <= rho(P#): {holds}"));
        ctx.report.value("rho", d.format_value(&a));
        ctx.report.value("rho_abstract", d.format_value(&b));
        let mut v = Verdict::single("rho(P) <= rho(P#)", holds);
        v.asserted = d.is_selective();
        if !v.asserted {
            ctx.report.notes.push(format!("{} is not selective; the rho inequality is recorded only", d.kind()));
        }
        ctx.verdict(v);
    }
    if check {
        let violation = find_abstraction_violation(&p, &p_sharp, &lift)?;
        match &violation {
            None => ctx.line("correct abstraction: yes"),
            Some(v) => {
                ctx.line(format!("correct abstraction: no ({v})"));
                ctx.report.counterexamples.push(v.to_string());
            }
        }
        ctx.verdict(Verdict::single("correct abstraction", violation.is_none()));
    }
    if ctx.failed && ctx.report.counterexamples.is_empty() {
        ctx.report.counterexamples.push(p.to_text());
    }
    Ok(())
}

fn cmd_galois(ctx: &mut Ctx, lattice: &LatticeSource) -> Result<(), Failure> {
    let dioid = Arc::new(CostDioid::maxplus());
    let (g, flags, even_n) = match lattice {
        LatticeSource::EvenIntervals { n, flags } => (GaloisLift::even_intervals(dioid, *n)?, flags, Some(*n)),
        LatticeSource::File { path, flags } => {
            let text = ctx.read(path)?;
            let file = parse_lattice_file(&text).with_context(|| format!("in `{path}`"))?;
            (file.into_lift(dioid)?, flags, None)
        }
    };
    let lattice = g.abstract_lattice();
    let atoms: Vec<&str> = lattice.join_irreducibles().iter().map(|&j| lattice.name(j)).collect();
    ctx.line(format!("concrete atoms: {}", g.concrete_atoms().join(" ")));
    ctx.line(format!("abstract atoms: {}", atoms.join(" ")));
    ctx.line(format!("lattice elements: {}", lattice.len()));
    ctx.report.value("concrete_atoms", g.concrete_atoms().join(" "));
    ctx.report.value("abstract_atoms", atoms.join(" "));
    for x in 0..lattice.len() {
        let enc = lattice.encode(g.dioid(), x).render_boolean();
        ctx.line(format!("  {} {}", lattice.name(x), enc));
    }
    if flags.show_matrix {
        ctx.line("alpha1:");
        let rendered = g.alpha1().render_boolean();
        ctx.text.push_str(&rendered);
        ctx.report.value("alpha1", rendered);
        ctx.report.matrices.insert("alpha1".into(), matrix_strings(g.alpha1()));
    }
    if flags.verify {
        let r = check_residuated_pair(&g);
        let rows = [
            ("pi . alpha1 lands in the lattice", r.range_in_lattice),
            ("abstraction after concretization is reductive", r.reductive),
            ("concretization after abstraction is extensive", r.extensive),
            ("pi . alpha1 monotone", r.abstraction_monotone),
            ("gamma1 . iota monotone", r.concretization_monotone),
        ];
        for (name, ok) in rows {
            ctx.line(format!("{name}: {ok}"));
            ctx.verdict(Verdict::single(name, ok));
        }
        let pair = if even_n == Some(2) {
            Some(check_linearizability_counterexample())
        } else {
            find_linearizability_counterexample(&g).map(|(i, j)| linearizability_check(&g, &[i], &[j]))
        };
        match pair {
            Some(rep) => {
                let (sum, joint) = rep.mismatch_positions();
                ctx.line(format!(
                    "non-linear on {{{}}} and {{{}}}: per-element lift {} vs {}; pi . alpha1 {} vs {}",
                    rep.left.join(","),
                    rep.right.join(","),
                    rep.partition_sum.render_boolean(),
                    rep.partition_joint.render_boolean(),
                    rep.lifted_sum.render_boolean(),
                    rep.lifted_joint.render_boolean(),
                ));
                ctx.report.value("nonlinear_pair", format!("{} {}", rep.left.join(","), rep.right.join(",")));
                ctx.report.value("partition_sum_positions", format!("{sum:?}"));
                ctx.report.value("partition_joint_positions", format!("{joint:?}"));
                ctx.line(format!("pi . alpha1 matches alpha on the union: {}", rep.lifted_agrees()));
                ctx.verdict(Verdict::single("pi . alpha1 matches alpha on the union", rep.lifted_agrees()));
            }
            None => ctx.line("pi . alpha1 is additive on every pair of atoms"),
        }
    }
    Ok(())
}

fn cmd_verify(ctx: &mut Ctx, args: &VerifyArgs) -> Result<(), Failure> {
    let kind: DioidKind = args.dioid.parse()?;
    let universe = kind.needs_universe().then(|| match &args.universe {
        Some(u) => u.split(',').map(|s| s.trim().to_string()).collect(),
        None => vec!["x".to_string(), "y".to_string(), "z".to_string()],
    });
    let dioid = Arc::new(CostDioid::new(kind, universe)?);
    if args.states == 0 {
        return Err(anyhow!("--states must be at least 1").into());
    }
    if !(0.0..=1.0).contains(&args.density) {
        return Err(anyhow!("--density must lie in [0, 1]").into());
    }
    let mut cfg = VerifyConfig::new(dioid, args.states..=args.states, args.trials, args.seed);
    cfg.density = args.density;
    cfg.suites = Suites {
        lemmas: args.lemmas,
        ..Suites::ALL
    };
    let out = run_verify(&cfg);
    ctx.line(format!(
        "verify {}: {} trials, {} states, seed {}",
        kind, args.trials, args.states, args.seed
    ));
    ctx.report.value("dioid", kind.to_string());
    ctx.report.value("trials", args.trials.to_string());
    ctx.report.value("states", args.states.to_string());
    ctx.report.value("seed", args.seed.to_string());
    for v in &out.verdicts {
        let mut line = format!("{:<20} {}/{}", v.check, v.passed, v.passed + v.failed);
        if v.skipped > 0 {
            let _ = write!(line, " ({} skipped)", v.skipped);
        }
        if !v.asserted {
            line.push_str(" (recorded only)");
        }
        ctx.line(line);
        ctx.verdict(v.clone());
    }
    for c in &out.counterexamples {
        ctx.line("counterexample:");
        ctx.text.push_str(c);
    }
    ctx.report.counterexamples.extend(out.counterexamples);
    Ok(())
}

fn json_flag(command: &Command) -> bool {
    match command {
        Command::Global { json, .. } | Command::Longrun { json, .. } | Command::Abstract { json, .. } => *json,
        Command::Galois { lattice } => match lattice {
            LatticeSource::EvenIntervals { flags, .. } | LatticeSource::File { flags, .. } => flags.json,
        },
        Command::Verify(v) => v.json,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    status: EXIT_USAGE,
                    stderr: rendered,
                    ..Default::default()
                }
            } else {
                Outcome {
                    status: EXIT_OK,
                    stdout: rendered,
                    ..Default::default()
                }
            };
        }
    };
    let start = Instant::now();
    let name = match &cli.command {
        Command::Global { .. } => "global",
        Command::Longrun { .. } => "longrun",
        Command::Abstract { .. } => "abstract",
        Command::Galois { .. } => "galois",
        Command::Verify(_) => "verify",
    };
    let mut ctx = Ctx::new(name, json_flag(&cli.command));
    let result = match &cli.command {
        Command::Global { file, merge_edges, .. } => cmd_global(&mut ctx, file, *merge_edges),
        Command::Longrun {
            file,
            oracle,
            merge_edges,
            ..
        } => cmd_longrun(&mut ctx, file, *oracle, *merge_edges),
        Command::Abstract {
            file,
            partition,
            check,
            against,
            longrun,
            global,
            ..
        } => cmd_abstract(&mut ctx, file, partition, *check, against.as_deref(), *longrun, *global),
        Command::Galois { lattice } => cmd_galois(&mut ctx, lattice),
        Command::Verify(args) => cmd_verify(&mut ctx, args),
    };
    if let Err(Failure::Usage(e)) = result {
        return Outcome {
            status: EXIT_USAGE,
            stderr: format!("error: {e:#}\n"),
            ..Default::default()
        };
    }
    ctx.report.duration_ms = start.elapsed().as_millis() as u64;
    let status = if ctx.failed { EXIT_CHECK_FAILED } else { EXIT_OK };
    let stdout = if ctx.json {
        let mut s = serde_json::to_string_pretty(&ctx.report).expect("report serializes");
        s.push('\n');
        s
    } else {
        ctx.text
    };
    let stderr = ctx.report.notes.iter().map(|n| format!("note: {n}\n")).collect();
    Outcome {
        status,
        report: Some(ctx.report),
        stdout,
        stderr,
    }
}
