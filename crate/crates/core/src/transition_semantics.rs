//! Transition systems `⟨Σ, M, I, F⟩`, their text format, and the global cost.
//!
//! ```text
//! # comment
//! dioid maxplus
//! states a b c d
//! init a
//! final d
//! edge a b 8
//! edge c c 2
//! ```
//!
//! Set carriers declare `universe x y z` before `states`. Missing edges are `⊥`.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::cost_dioid::{CostDioid, CostValue, DioidKind};
use crate::error::{ParseError, ParseErrorKind, SystemError};
use crate::moduloid::CostMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionSystem {
    states: Vec<String>,
    matrix: CostMatrix,
    init: Vec<usize>,
    finals: Vec<usize>,
}

fn dedup_sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl TransitionSystem {
    /// Validates names, matrix shape, and that `I` and `F` are nonempty.
    pub fn new(
        states: Vec<String>,
        matrix: CostMatrix,
        init: Vec<usize>,
        finals: Vec<usize>,
    ) -> Result<Self, SystemError> {
        let system = TransitionSystem::unchecked_sets(states, matrix, init, finals)?;
        if system.init.is_empty() {
            return Err(SystemError::EmptySet("initial"));
        }
        if system.finals.is_empty() {
            return Err(SystemError::EmptySet("final"));
        }
        Ok(system)
    }

    fn unchecked_sets(
        states: Vec<String>,
        matrix: CostMatrix,
        init: Vec<usize>,
        finals: Vec<usize>,
    ) -> Result<Self, SystemError> {
        if states.is_empty() {
            return Err(SystemError::NoStates);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(SystemError::DuplicateState(s.clone()));
            }
        }
        let n = states.len();
        if matrix.dims() != (n, n) {
            return Err(SystemError::MatrixShape {
                expected: n,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if let Some(&bad) = init.iter().chain(&finals).find(|&&i| i >= n) {
            return Err(SystemError::UnknownState(format!("#{bad}")));
        }
        Ok(TransitionSystem {
            states,
            matrix,
            init: dedup_sorted(init),
            finals: dedup_sorted(finals),
        })
    }

    /// Convenience constructor from named edges.
    pub fn from_edges(
        dioid: Arc<CostDioid>,
        states: &[&str],
        edges: &[(&str, &str, CostValue)],
        init: &[&str],
        finals: &[&str],
    ) -> Result<Self, SystemError> {
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let index = |name: &str| {
            names
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| SystemError::UnknownState(name.to_string()))
        };
        if names.is_empty() {
            return Err(SystemError::NoStates);
        }
        let mut matrix = CostMatrix::zero(dioid.clone(), names.len(), names.len());
        for (from, to, cost) in edges {
            dioid.check(cost)?;
            matrix.set(index(from)?, index(to)?, cost.clone());
        }
        let init = init.iter().map(|s| index(s)).collect::<Result<_, _>>()?;
        let finals = finals.iter().map(|s| index(s)).collect::<Result<_, _>>()?;
        TransitionSystem::new(names, matrix, init, finals)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn matrix(&self) -> &CostMatrix {
        &self.matrix
    }

    pub fn dioid(&self) -> &Arc<CostDioid> {
        self.matrix.dioid()
    }

    pub fn init(&self) -> &[usize] {
        &self.init
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn edge(&self, from: usize, to: usize) -> &CostValue {
        self.matrix.get(from, to)
    }

    /// Same states and sets, different transition matrix.
    pub fn with_matrix(&self, matrix: CostMatrix) -> Result<Self, SystemError> {
        TransitionSystem::unchecked_sets(
            self.states.clone(),
            matrix,
            self.init.clone(),
            self.finals.clone(),
        )
    }

    /// Canonical text form: parses back to an equal system.
    pub fn to_text(&self) -> String {
        let d = self.dioid();
        let mut out = String::new();
        let _ = writeln!(out, "dioid {}", d.kind());
        if d.kind().needs_universe() {
            let _ = writeln!(out, "universe {}", d.universe().join(" "));
        }
        let _ = writeln!(out, "states {}", self.states.join(" "));
        let names = |ids: &[usize]| {
            ids.iter()
                .map(|&i| self.states[i].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "init {}", names(&self.init));
        let _ = writeln!(out, "final {}", names(&self.finals));
        for i in 0..self.len() {
            for j in 0..self.len() {
                let cost = self.edge(i, j);
                if !d.is_zero(cost) {
                    let _ = writeln!(
                        out,
                        "edge {} {} {}",
                        self.states[i],
                        self.states[j],
                        d.format_value(cost)
                    );
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// ⊕-merge repeated edges instead of rejecting them.
    pub merge_edges: bool,
}

/// A parsed system plus non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub system: TransitionSystem,
    pub warnings: Vec<String>,
}

pub fn parse_system(text: &str) -> Result<TransitionSystem, ParseError> {
    parse_system_with(text, ParseOptions::default()).map(|p| p.system)
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    tokens
}

pub fn parse_system_with(text: &str, options: ParseOptions) -> Result<Parsed, ParseError> {
    let err = |line: usize, column: usize, kind: ParseErrorKind| ParseError { line, column, kind };

    let mut dioid_decl: Option<(DioidKind, usize)> = None;
    let mut universe: Option<Vec<String>> = None;
    let mut dioid: Option<Arc<CostDioid>> = None;
    let mut states: Vec<String> = Vec::new();
    let mut init: Option<Vec<usize>> = None;
    let mut finals: Option<Vec<usize>> = None;
    let mut matrix: Option<CostMatrix> = None;
    let mut seen: Vec<bool> = Vec::new();
    let mut warnings = Vec::new();
    let mut last_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(head) = tokens.first() else { continue };
        let args = &tokens[1..];
        let lookup = |tok: &Token| {
            states
                .iter()
                .position(|s| s == tok.text)
                .ok_or_else(|| err(line_no, tok.column, ParseErrorKind::UnknownState(tok.text.to_string())))
        };
        match head.text {
            "dioid" => {
                if dioid_decl.is_some() {
                    return Err(err(line_no, head.column, ParseErrorKind::Syntax("repeated `dioid`".into())));
                }
                let spec: String = args.iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
                let spec = match args {
                    [name, dim] if name.text == "minplus_vec" => format!("minplus_vec({})", dim.text),
                    _ => spec,
                };
                let kind: DioidKind = spec.parse().map_err(|e| {
                    err(line_no, args.first().map_or(head.column, |t| t.column), ParseErrorKind::Dioid(e))
                })?;
                dioid_decl = Some((kind, line_no));
            }
            "universe" => {
                if dioid_decl.is_none() || !states.is_empty() {
                    return Err(err(
                        line_no,
                        head.column,
                        ParseErrorKind::Syntax("`universe` must follow `dioid` and precede `states`".into()),
                    ));
                }
                universe = Some(args.iter().map(|t| t.text.to_string()).collect());
            }
            "states" => {
                let (kind, _) = dioid_decl.ok_or_else(|| err(line_no, head.column, ParseErrorKind::Missing("dioid")))?;
                if !states.is_empty() {
                    return Err(err(line_no, head.column, ParseErrorKind::Syntax("repeated `states`".into())));
                }
                if args.is_empty() {
                    return Err(err(line_no, head.column, ParseErrorKind::Syntax("no states declared".into())));
                }
                for tok in args {
                    if states.iter().any(|s| s == tok.text) {
                        return Err(err(line_no, tok.column, ParseErrorKind::DuplicateState(tok.text.to_string())));
                    }
                    states.push(tok.text.to_string());
                }
                let d = CostDioid::new(kind, universe.clone())
                    .map_err(|e| err(line_no, head.column, ParseErrorKind::Dioid(e)))?;
                let d = Arc::new(d);
                matrix = Some(CostMatrix::zero(d.clone(), states.len(), states.len()));
                seen = vec![false; states.len() * states.len()];
                dioid = Some(d);
            }
            "init" | "final" => {
                if states.is_empty() {
                    return Err(err(line_no, head.column, ParseErrorKind::Missing("states")));
                }
                if args.is_empty() {
                    return Err(err(line_no, head.column, ParseErrorKind::Syntax(format!("empty `{}`", head.text))));
                }
                let ids = args.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
                let slot = if head.text == "init" { &mut init } else { &mut finals };
                slot.get_or_insert_with(Vec::new).extend(ids);
            }
            "edge" => {
                let (Some(d), Some(m)) = (dioid.as_ref(), matrix.as_mut()) else {
                    return Err(err(line_no, head.column, ParseErrorKind::Missing("states")));
                };
                if args.len() < 3 {
                    return Err(err(
                        line_no,
                        head.column,
                        ParseErrorKind::Syntax("expected `edge FROM TO COST`".into()),
                    ));
                }
                let from = states
                    .iter()
                    .position(|s| s == args[0].text)
                    .ok_or_else(|| err(line_no, args[0].column, ParseErrorKind::UnknownState(args[0].text.into())))?;
                let to = states
                    .iter()
                    .position(|s| s == args[1].text)
                    .ok_or_else(|| err(line_no, args[1].column, ParseErrorKind::UnknownState(args[1].text.into())))?;
                let literal: String = args[2..].iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
                let cost = d
                    .parse_value(&literal)
                    .map_err(|e| err(line_no, args[2].column, ParseErrorKind::Dioid(e)))?;
                let slot = from * states.len() + to;
                if seen[slot] {
                    if !options.merge_edges {
                        return Err(err(
                            line_no,
                            head.column,
                            ParseErrorKind::DuplicateEdge(states[from].clone(), states[to].clone()),
                        ));
                    }
                    let merged = d.oplus(m.get(from, to), &cost);
                    m.set(from, to, merged);
                } else {
                    m.set(from, to, cost);
                    seen[slot] = true;
                }
            }
            other => {
                return Err(err(
                    line_no,
                    head.column,
                    ParseErrorKind::Syntax(format!("unknown directive `{other}`")),
                ))
            }
        }
    }

    let end = |what| err(last_line.max(1), 1, ParseErrorKind::Missing(what));
    if dioid_decl.is_none() {
        return Err(end("dioid"));
    }
    let matrix = matrix.ok_or_else(|| end("states"))?;
    let init = init.unwrap_or_else(|| {
        warnings.push(format!("no `init` line; defaulting to first state `{}`", states[0]));
        vec![0]
    });
    let finals = finals.unwrap_or_else(|| {
        let last = states.len() - 1;
        warnings.push(format!("no `final` line; defaulting to last state `{}`", states[last]));
        vec![last]
    });
    let system = TransitionSystem::new(states, matrix, init, finals)
        .map_err(|e| err(last_line.max(1), 1, ParseErrorKind::Syntax(e.to_string())))?;
    Ok(Parsed { system, warnings })
}

/// Ordinals reachable from `I` through non-`⊥` edges, `I` included, in state order.
pub fn reachable_states(p: &TransitionSystem) -> Vec<usize> {
    let n = p.len();
    let d = p.dioid();
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = p.init().iter().copied().collect();
    for &i in p.init() {
        seen[i] = true;
    }
    while let Some(s) = queue.pop_front() {
        for t in 0..n {
            if !seen[t] && !d.is_zero(p.edge(s, t)) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    (0..n).filter(|&i| seen[i]).collect()
}

/// The subsystem on `Σ_I`. Its final set is `F ∩ Σ_I`, which may be empty.
pub fn reachable_restrict(p: &TransitionSystem) -> TransitionSystem {
    let keep = reachable_states(p);
    let remap = |ids: &[usize]| -> Vec<usize> {
        ids.iter()
            .filter_map(|i| keep.iter().position(|k| k == i))
            .collect()
    };
    TransitionSystem {
        states: keep.iter().map(|&i| p.states[i].clone()).collect(),
        matrix: p.matrix.restrict(&keep).expect("I is nonempty"),
        init: remap(&p.init),
        finals: remap(&p.finals),
    }
}

/// `gc(P) = ⊕ { M⁺[i][f] | i ∈ I, f ∈ F }`.
pub fn global_cost(p: &TransitionSystem) -> Result<CostValue, SystemError> {
    let closure = p.matrix.kleene_plus()?;
    let d = p.dioid();
    Ok(d.sum(
        p.init
            .iter()
            .flat_map(|&i| p.finals.iter().map(move |&f| (i, f)))
            .map(|(i, f)| closure.get(i, f)),
    ))
}

/// ⊕ of the costs of all traces from `I` to `F` with between 1 and `max_len` transitions.
///
/// Propagates the vector of best costs one step at a time; it never forms the closure.
pub fn bounded_trace_costs(p: &TransitionSystem, max_len: usize) -> CostValue {
    let d = p.dioid();
    let n = p.len();
    let mut frontier = vec![d.zero(); n];
    for &i in &p.init {
        frontier[i] = d.unit();
    }
    let mut total = d.zero();
    for _ in 0..max_len {
        let mut next = vec![d.zero(); n];
        for s in 0..n {
            if d.is_zero(&frontier[s]) {
                continue;
            }
            for (t, slot) in next.iter_mut().enumerate() {
                let step = d.otimes(&frontier[s], p.edge(s, t));
                *slot = d.oplus(slot, &step);
            }
        }
        for &f in &p.finals {
            total = d.oplus(&total, &next[f]);
        }
        frontier = next;
    }
    total
}
