//! Long-run cost: the worst average cost per transition over cycles.
//!
//! `ρ(P) = ⊕_{k=1..|Σ_I|} ᵏ√(tr Rᵏ)` where `R` is `M` restricted to the
//! states reachable from `I`. For an irreducible matrix over (max, +) this
//! is its maximal eigenvalue, i.e. the maximum cycle mean. The definition is
//! evaluated directly with `O(n⁴)` dioid operations.

use crate::cost_dioid::CostValue;
use crate::error::{MatrixError, SystemError};
use crate::moduloid::CostMatrix;
use crate::transition_semantics::{reachable_restrict, TransitionSystem};

/// `ρ` of a system, after restriction to the states reachable from `I`.
pub fn long_run_cost(p: &TransitionSystem) -> Result<CostValue, SystemError> {
    let restricted = reachable_restrict(p);
    Ok(long_run_cost_matrix(restricted.matrix())?)
}

/// `⊕_{k=1..n} ᵏ√(tr Mᵏ)` over every state of a square matrix.
pub fn long_run_cost_matrix(m: &CostMatrix) -> Result<CostValue, MatrixError> {
    long_run_cost_bounded(m, m.rows())
}

/// Same as [`long_run_cost_matrix`] with cycle lengths bounded by `max_len`.
pub fn long_run_cost_bounded(m: &CostMatrix, max_len: usize) -> Result<CostValue, MatrixError> {
    let d = m.dioid().clone();
    let mut acc = d.zero();
    let mut power = m.clone();
    for k in 1..=max_len {
        if k > 1 {
            power = power.mul(m)?;
        }
        let mean = d.nth_root(&power.trace()?, k as u32)?;
        acc = d.oplus(&acc, &mean);
    }
    Ok(acc)
}

/// `|p|`-th root of the ⊗-product along `path` (given by state name).
pub fn average_path_cost(p: &TransitionSystem, path: &[&str]) -> Result<CostValue, SystemError> {
    let ids = path
        .iter()
        .map(|s| p.index_of(s).ok_or_else(|| SystemError::UnknownState(s.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    average_path_cost_ids(p, &ids)
}

pub fn average_path_cost_ids(p: &TransitionSystem, path: &[usize]) -> Result<CostValue, SystemError> {
    if path.len() < 2 {
        return Err(SystemError::PathTooShort);
    }
    let d = p.dioid();
    let mut total = d.unit();
    for w in path.windows(2) {
        let cost = p.edge(w[0], w[1]);
        if d.is_zero(cost) {
            return Err(SystemError::MissingEdge(
                p.states()[w[0]].clone(),
                p.states()[w[1]].clone(),
            ));
        }
        total = d.otimes(&total, cost);
    }
    Ok(d.nth_root(&total, (path.len() - 1) as u32)?)
}
