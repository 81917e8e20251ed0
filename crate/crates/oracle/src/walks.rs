//! Walk enumeration.

use std::cell::Cell;

use tropicost_core::{CostDioid, CostMatrix, CostValue, TransitionSystem};

use crate::{OracleError, DEFAULT_WALK_BUDGET, WALK_BUDGET_ENV};

/// Counts walk extensions and fails once the limit is passed.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: Cell::new(0),
        }
    }

    /// Limit from the environment, else the default.
    pub fn from_env() -> Self {
        let limit = std::env::var(WALK_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_WALK_BUDGET);
        Budget::new(limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    fn spend(&self) -> Result<(), OracleError> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limit {
            Err(OracleError::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

/// Visits every walk of 1..=`maxlen` edges from `from`, skipping ⊥ edges.
/// The callback receives the walk (vertex list) and its ⊗-cost.
fn for_each_walk(
    m: &CostMatrix,
    from: usize,
    maxlen: usize,
    budget: &Budget,
    visit: &mut dyn FnMut(&[usize], &CostValue),
) -> Result<(), OracleError> {
    fn go(
        m: &CostMatrix,
        d: &CostDioid,
        walk: &mut Vec<usize>,
        cost: &CostValue,
        maxlen: usize,
        budget: &Budget,
        visit: &mut dyn FnMut(&[usize], &CostValue),
    ) -> Result<(), OracleError> {
        if walk.len() > maxlen {
            return Ok(());
        }
        let last = *walk.last().expect("walk starts at a vertex");
        for next in 0..m.cols() {
            let w = m.get(last, next);
            if d.is_zero(w) {
                continue;
            }
            budget.spend()?;
            let extended = d.otimes(cost, w);
            walk.push(next);
            visit(walk, &extended);
            go(m, d, walk, &extended, maxlen, budget, visit)?;
            walk.pop();
        }
        Ok(())
    }
    let d = m.dioid().clone();
    let mut walk = vec![from];
    go(m, &d, &mut walk, &d.unit(), maxlen, budget, visit)
}

/// All walks `from → to` with 1..=`maxlen` edges and their ⊗-costs.
pub fn enumerate_paths(
    p: &TransitionSystem,
    from: usize,
    to: usize,
    maxlen: usize,
    budget: &Budget,
) -> Result<Vec<(Vec<usize>, CostValue)>, OracleError> {
    let mut out = Vec::new();
    for_each_walk(p.matrix(), from, maxlen, budget, &mut |walk, cost| {
        if *walk.last().expect("nonempty") == to {
            out.push((walk.to_vec(), cost.clone()));
        }
    })?;
    Ok(out)
}

/// States reachable from `sources` in zero or more steps.
pub fn reachable_from(m: &CostMatrix, sources: &[usize]) -> Vec<bool> {
    let d = m.dioid();
    let mut seen = vec![false; m.rows()];
    let mut stack: Vec<usize> = sources.to_vec();
    while let Some(s) = stack.pop() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        for t in 0..m.cols() {
            if !d.is_zero(m.get(s, t)) && !seen[t] {
                stack.push(t);
            }
        }
    }
    seen
}

/// `⊕` of the costs of walks `i → j` with exactly `k` edges, for every pair.
pub fn power_oracle(m: &CostMatrix, k: usize, budget: &Budget) -> Result<Vec<Vec<CostValue>>, OracleError> {
    let d = m.dioid().clone();
    let n = m.rows();
    let mut out = vec![vec![d.zero(); n]; n];
    if k == 0 {
        for (i, row) in out.iter_mut().enumerate() {
            row[i] = d.unit();
        }
        return Ok(out);
    }
    for (i, row) in out.iter_mut().enumerate() {
        for_each_walk(m, i, k, budget, &mut |walk, cost| {
            if walk.len() == k + 1 {
                let j = walk[k];
                row[j] = d.oplus(&row[j], cost);
            }
        })?;
    }
    Ok(out)
}

/// `M⁺` by enumeration.
///
/// On a totally ordered carrier, entry `(i, j)` is ⊤ when some state `c`
/// with `i →* c →* j` lies on a closed walk of at most `n` edges whose cost
/// is not `≤ e`: pumping that walk grows without bound. Every other entry is
/// the ⊕ over walks of 1..=`n` edges, checked to be unchanged at `n + 1`.
pub fn closure_oracle(m: &CostMatrix, budget: &Budget) -> Result<Vec<Vec<CostValue>>, OracleError> {
    let d = m.dioid().clone();
    let n = m.rows();
    let unit = d.unit();

    let mut pumpable = vec![false; n];
    if d.is_totally_ordered() {
        for (c, flag) in pumpable.iter_mut().enumerate() {
            for_each_walk(m, c, n, budget, &mut |walk, cost| {
                if *walk.last().expect("nonempty") == c && !d.leq(cost, &unit) {
                    *flag = true;
                }
            })?;
        }
    }
    let reach: Vec<Vec<bool>> = (0..n).map(|i| reachable_from(m, &[i])).collect();

    let mut out = vec![vec![d.zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        let mut upto_n = vec![d.zero(); n];
        let mut upto_next = vec![d.zero(); n];
        for_each_walk(m, i, n + 1, budget, &mut |walk, cost| {
            let j = *walk.last().expect("nonempty");
            if walk.len() <= n + 1 {
                upto_n[j] = d.oplus(&upto_n[j], cost);
            }
            upto_next[j] = d.oplus(&upto_next[j], cost);
        })?;
        for j in 0..n {
            let diverges = (0..n).any(|c| pumpable[c] && reach[i][c] && reach[c][j]);
            if diverges {
                row[j] = d.top();
            } else if upto_n[j] != upto_next[j] {
                return Err(OracleError::NotStabilized { row: i, col: j });
            } else {
                row[j] = upto_n[j].clone();
            }
        }
    }
    Ok(out)
}

/// `⊕` of `ᵏ√cost` over closed walks of 1..=`maxlen` edges among the states
/// reachable from `I`.
pub fn cycle_means_oracle(p: &TransitionSystem, maxlen: usize, budget: &Budget) -> Result<CostValue, OracleError> {
    let m = p.matrix();
    let d = m.dioid().clone();
    let reachable = reachable_from(m, p.init());
    let mut acc = d.zero();
    let mut failure = None;
    for c in (0..m.rows()).filter(|&c| reachable[c]) {
        for_each_walk(m, c, maxlen, budget, &mut |walk, cost| {
            if *walk.last().expect("nonempty") == c && failure.is_none() {
                match d.nth_root(cost, (walk.len() - 1) as u32) {
                    Ok(mean) => acc = d.oplus(&acc, &mean),
                    Err(e) => failure = Some(OracleError::Dioid(e.to_string())),
                }
            }
        })?;
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Simple cycles (no repeated vertex), each listed once from its smallest vertex.
pub fn simple_cycles(m: &CostMatrix) -> Vec<Vec<usize>> {
    fn go(m: &CostMatrix, d: &CostDioid, start: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        for next in start..m.cols() {
            if d.is_zero(m.get(last, next)) {
                continue;
            }
            if next == start {
                out.push(path.clone());
            } else if !path.contains(&next) {
                path.push(next);
                go(m, d, start, path, out);
                path.pop();
            }
        }
    }
    let d = m.dioid().clone();
    let mut out = Vec::new();
    for start in 0..m.rows() {
        go(m, &d, start, &mut vec![start], &mut out);
    }
    out
}

/// `⊕` of average costs over simple cycles among the states reachable from `I`.
pub fn simple_cycle_means(p: &TransitionSystem) -> Result<CostValue, OracleError> {
    let m = p.matrix();
    let d = m.dioid().clone();
    let reachable = reachable_from(m, p.init());
    let mut acc = d.zero();
    for cycle in simple_cycles(m).into_iter().filter(|c| reachable[c[0]]) {
        let mut cost = d.unit();
        for (k, &s) in cycle.iter().enumerate() {
            let t = cycle[(k + 1) % cycle.len()];
            cost = d.otimes(&cost, m.get(s, t));
        }
        let mean = d
            .nth_root(&cost, cycle.len() as u32)
            .map_err(|e| OracleError::Dioid(e.to_string()))?;
        acc = d.oplus(&acc, &mean);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropicost_core::parse_system;

    const LRC: &str = "dioid maxplus\nstates a b c d\ninit a\nfinal d\n\
        edge a b 8\nedge b c 3\nedge c c 2\nedge c d 4\nedge d b 5\n";

    #[test]
    fn running_example_paths() {
        let p = parse_system(LRC).unwrap();
        let paths = enumerate_paths(&p, 0, 3, 4, &Budget::new(1000)).unwrap();
        let found: Vec<(Vec<usize>, CostValue)> = paths;
        assert_eq!(
            found,
            vec![
                (vec![0, 1, 2, 2, 3], CostValue::int(17)),
                (vec![0, 1, 2, 3], CostValue::int(15)),
            ]
        );
    }

    #[test]
    fn chain_and_no_loop() {
        let p = parse_system("dioid maxplus\nstates a b\ninit a\nfinal b\nedge a b 8\n").unwrap();
        let b = Budget::new(100);
        assert_eq!(enumerate_paths(&p, 0, 1, 3, &b).unwrap(), vec![(vec![0, 1], CostValue::int(8))]);
        assert!(enumerate_paths(&p, 0, 0, 3, &b).unwrap().is_empty());
    }

    #[test]
    fn cycle_means() {
        let p = parse_system(LRC).unwrap();
        let b = Budget::new(100_000);
        assert_eq!(cycle_means_oracle(&p, 4, &b).unwrap(), CostValue::int(4));
        assert_eq!(simple_cycle_means(&p).unwrap(), CostValue::int(4));
        let cycles = simple_cycles(p.matrix());
        assert_eq!(cycles, vec![vec![1, 2, 3], vec![2]]);
        let acyclic = parse_system("dioid maxplus\nstates a b\ninit a\nfinal b\nedge a b 8\n").unwrap();
        assert_eq!(cycle_means_oracle(&acyclic, 2, &b).unwrap(), CostValue::neg_inf());
        let lone = parse_system("dioid maxplus\nstates s\ninit s\nfinal s\nedge s s 3/2\n").unwrap();
        for len in 1..5 {
            assert_eq!(cycle_means_oracle(&lone, len, &b).unwrap(), CostValue::ratio(3, 2));
        }
    }

    #[test]
    fn closure_certificates() {
        let p = parse_system(LRC).unwrap();
        let c = closure_oracle(p.matrix(), &Budget::new(1_000_000)).unwrap();
        assert_eq!(c[0][3], CostValue::pos_inf());
        assert_eq!(c[1][0], CostValue::neg_inf());
        let q = parse_system(&LRC.replace("maxplus", "minplus")).unwrap();
        let c = closure_oracle(q.matrix(), &Budget::new(1_000_000)).unwrap();
        assert_eq!(c[0][3], CostValue::int(15));
        assert_eq!(c[1][1], CostValue::int(12));
    }

    #[test]
    fn powers_by_enumeration() {
        let p = parse_system(LRC).unwrap();
        let b = Budget::new(100_000);
        assert_eq!(power_oracle(p.matrix(), 3, &b).unwrap()[1][1], CostValue::int(12));
        assert_eq!(power_oracle(p.matrix(), 0, &b).unwrap()[2][2], CostValue::int(0));
    }

    #[test]
    fn budget_is_enforced() {
        let p = parse_system(LRC).unwrap();
        let err = enumerate_paths(&p, 0, 3, 30, &Budget::new(50)).unwrap_err();
        assert_eq!(err, OracleError::BudgetExceeded { budget: 50 });
    }
}
