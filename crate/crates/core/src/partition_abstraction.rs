//! Partition-based abstraction of transition systems.
//!
//! A total state map `α: Σ → Σ♯` lifts to the `{⊥, e}` matrix `α♯` with
//! `α♯[σ♯][σ] = e ⟺ α(σ) = σ♯`. Its residual is the transpose `γ♯ = α♯ᵀ`,
//! and the best abstract system is `M♯ = α♯ · M · γ♯`.

use std::fmt;
use std::sync::Arc;

use crate::cost_dioid::CostDioid;
use crate::error::AbstractionError;
use crate::moduloid::CostMatrix;
use crate::transition_semantics::TransitionSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionLift {
    concrete: Vec<String>,
    abstract_states: Vec<String>,
    alpha: CostMatrix,
    gamma: CostMatrix,
}

impl PartitionLift {
    /// Wraps an arbitrary `{⊥, e}` matrix without checking that it encodes a
    /// total single-valued map. Useful to exercise [`check_galois`] on broken lifts.
    pub fn from_alpha_matrix(
        concrete: Vec<String>,
        abstract_states: Vec<String>,
        alpha: CostMatrix,
    ) -> Result<Self, AbstractionError> {
        if alpha.dims() != (abstract_states.len(), concrete.len()) {
            return Err(AbstractionError::StateMismatch);
        }
        let gamma = alpha.transpose();
        Ok(PartitionLift {
            concrete,
            abstract_states,
            alpha,
            gamma,
        })
    }

    pub fn concrete(&self) -> &[String] {
        &self.concrete
    }

    pub fn abstract_states(&self) -> &[String] {
        &self.abstract_states
    }

    pub fn alpha(&self) -> &CostMatrix {
        &self.alpha
    }

    pub fn gamma(&self) -> &CostMatrix {
        &self.gamma
    }

    /// Abstract ordinals whose row holds `e` in the column of concrete state `sigma`.
    pub fn images(&self, sigma: usize) -> Vec<usize> {
        self.alpha.column(sigma).support()
    }
}

/// Builds `α♯` from `(concrete, abstract)` name pairs.
pub fn lift_partition(
    dioid: Arc<CostDioid>,
    concrete: &[String],
    abstract_states: &[String],
    map: &[(String, String)],
) -> Result<PartitionLift, AbstractionError> {
    let mut image: Vec<Option<usize>> = vec![None; concrete.len()];
    for (c, a) in map {
        let ci = concrete
            .iter()
            .position(|s| s == c)
            .ok_or_else(|| AbstractionError::UnknownConcreteState(c.clone()))?;
        let ai = abstract_states
            .iter()
            .position(|s| s == a)
            .ok_or_else(|| AbstractionError::UnknownAbstractState(a.clone()))?;
        image[ci] = Some(ai);
    }
    let image = image
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or_else(|| AbstractionError::PartialMap(concrete[i].clone())))
        .collect::<Result<Vec<_>, _>>()?;
    lift_partition_indices(dioid, concrete, abstract_states, &image)
}

/// Builds `α♯` from a total map given as abstract ordinals per concrete ordinal.
pub fn lift_partition_indices(
    dioid: Arc<CostDioid>,
    concrete: &[String],
    abstract_states: &[String],
    image: &[usize],
) -> Result<PartitionLift, AbstractionError> {
    if image.len() != concrete.len() {
        return Err(AbstractionError::StateMismatch);
    }
    let mut alpha = CostMatrix::zero(dioid.clone(), abstract_states.len(), concrete.len());
    for (c, &a) in image.iter().enumerate() {
        if a >= abstract_states.len() {
            return Err(AbstractionError::UnknownAbstractState(format!("#{a}")));
        }
        alpha.set(a, c, dioid.unit());
    }
    PartitionLift::from_alpha_matrix(concrete.to_vec(), abstract_states.to_vec(), alpha)
}

/// Parses `map CONCRETE -> ABSTRACT` lines. Abstract states are ordered by
/// an optional `abstract A B ...` line, then by first appearance.
pub fn parse_partition(
    text: &str,
) -> Result<(Vec<String>, Vec<(String, String)>), AbstractionError> {
    let mut abstract_states: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| AbstractionError::MapSyntax {
            line: lineno + 1,
            message: message.to_string(),
        };
        if let Some(rest) = line.strip_prefix("abstract ") {
            for name in rest.split_whitespace() {
                if !abstract_states.iter().any(|s| s == name) {
                    abstract_states.push(name.to_string());
                }
            }
            continue;
        }
        let rest = line
            .strip_prefix("map ")
            .ok_or_else(|| syntax("expected `map CONCRETE -> ABSTRACT`"))?;
        let (c, a) = rest
            .split_once("->")
            .ok_or_else(|| syntax("missing `->`"))?;
        let (c, a) = (c.trim(), a.trim());
        if c.is_empty() || a.is_empty() || c.contains(' ') || a.contains(' ') {
            return Err(syntax("expected single state names around `->`"));
        }
        if pairs.iter().any(|(seen, _)| seen == c) {
            return Err(syntax(&format!("`{c}` mapped twice")));
        }
        if !abstract_states.iter().any(|s| s == a) {
            abstract_states.push(a.to_string());
        }
        pairs.push((c.to_string(), a.to_string()));
    }
    Ok((abstract_states, pairs))
}

/// `α♯ γ♯ ≤ Id` and `Id ≤ γ♯ α♯`.
pub fn check_galois(lift: &PartitionLift) -> bool {
    let d = lift.alpha.dioid().clone();
    let (m, n) = lift.alpha.dims();
    let upper = lift
        .alpha
        .mul(&lift.gamma)
        .and_then(|p| p.leq(&CostMatrix::identity(d.clone(), m)));
    let lower = lift
        .gamma
        .mul(&lift.alpha)
        .and_then(|p| CostMatrix::identity(d, n).leq(&p));
    matches!((upper, lower), (Ok(true), Ok(true)))
}

fn require_same_states(p: &TransitionSystem, lift: &PartitionLift) -> Result<(), AbstractionError> {
    if p.states() != lift.concrete() {
        return Err(AbstractionError::StateMismatch);
    }
    Ok(())
}

fn image_set(lift: &PartitionLift, ids: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = ids.iter().flat_map(|&i| lift.images(i)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `⟨Σ♯, α♯ M γ♯, α(I), α(F)⟩`.
pub fn best_abstract_system(
    p: &TransitionSystem,
    lift: &PartitionLift,
) -> Result<TransitionSystem, AbstractionError> {
    require_same_states(p, lift)?;
    let m_sharp = lift.alpha.mul(p.matrix())?.mul(&lift.gamma)?;
    Ok(TransitionSystem::new(
        lift.abstract_states.clone(),
        m_sharp,
        image_set(lift, p.init()),
        image_set(lift, p.finals()),
    )?)
}

/// Why a candidate abstraction fails to be correct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(α♯ M)[σ♯][σ] ≤ (M♯ α♯)[σ♯][σ]` fails.
    Transition { abstract_state: String, concrete_state: String },
    /// `α(σ) ∉ I♯` for an initial `σ`.
    Initial(String),
    /// `α(σ) ∉ F♯` for a final `σ`.
    Final(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Transition {
                abstract_state,
                concrete_state,
            } => write!(
                f,
                "alpha*M exceeds M#*alpha at ({abstract_state}, {concrete_state})"
            ),
            Violation::Initial(s) => write!(f, "image of initial state {s} is not initial"),
            Violation::Final(s) => write!(f, "image of final state {s} is not final"),
        }
    }
}

/// Checks `α♯ M ≤ M♯ α♯`, `α(I) ⊆ I♯` and `α(F) ⊆ F♯`; returns the first violation.
pub fn find_abstraction_violation(
    p: &TransitionSystem,
    p_sharp: &TransitionSystem,
    lift: &PartitionLift,
) -> Result<Option<Violation>, AbstractionError> {
    require_same_states(p, lift)?;
    if p_sharp.states() != lift.abstract_states() {
        return Err(AbstractionError::StateMismatch);
    }
    let left = lift.alpha.mul(p.matrix())?;
    let right = p_sharp.matrix().mul(&lift.alpha)?;
    if let Some((a, c)) = left.first_violation(&right)? {
        return Ok(Some(Violation::Transition {
            abstract_state: lift.abstract_states[a].clone(),
            concrete_state: lift.concrete[c].clone(),
        }));
    }
    for &i in p.init() {
        if lift.images(i).iter().any(|a| !p_sharp.init().contains(a)) {
            return Ok(Some(Violation::Initial(p.states()[i].clone())));
        }
    }
    for &f in p.finals() {
        if lift.images(f).iter().any(|a| !p_sharp.finals().contains(a)) {
            return Ok(Some(Violation::Final(p.states()[f].clone())));
        }
    }
    Ok(None)
}

pub fn check_correct_abstraction(
    p: &TransitionSystem,
    p_sharp: &TransitionSystem,
    lift: &PartitionLift,
) -> Result<bool, AbstractionError> {
    Ok(find_abstraction_violation(p, p_sharp, lift)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost_dioid::CostValue;
    use crate::transition_semantics::parse_system;

    const LRC: &str = "dioid maxplus\nstates a b c d\ninit a\nfinal d\n\
        edge a b 8\nedge b c 3\nedge c c 2\nedge c d 4\nedge d b 5\n";

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn block_lift(p: &TransitionSystem) -> PartitionLift {
        let (abs, pairs) = parse_partition("map a -> A\nmap b -> B\nmap c -> B\nmap d -> B\n").unwrap();
        lift_partition(p.dioid().clone(), p.states(), &abs, &pairs).unwrap()
    }

    #[test]
    fn identity_lift() {
        let p = parse_system(LRC).unwrap();
        let lift = lift_partition_indices(p.dioid().clone(), p.states(), p.states(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(lift.alpha(), &CostMatrix::identity(p.dioid().clone(), 4));
        assert!(check_galois(&lift));
        let best = best_abstract_system(&p, &lift).unwrap();
        assert_eq!(best, p);
        assert!(check_correct_abstraction(&p, &p, &lift).unwrap());
    }

    #[test]
    fn block_lift_matrix_and_system() {
        let p = parse_system(LRC).unwrap();
        let lift = block_lift(&p);
        assert_eq!(lift.alpha().render_boolean(), "e . . .\n. e e e\n");
        assert_eq!(lift.gamma(), &lift.alpha().transpose());
        assert!(check_galois(&lift));
        let best = best_abstract_system(&p, &lift).unwrap();
        assert_eq!(best.edge(0, 1), &CostValue::int(8));
        assert_eq!(best.edge(1, 1), &CostValue::int(5));
        assert_eq!(best.edge(1, 0), &CostValue::neg_inf());
        assert_eq!(best.init(), [0]);
        assert_eq!(best.finals(), [1]);
        assert!(check_correct_abstraction(&p, &best, &lift).unwrap());
    }

    #[test]
    fn lowered_entry_breaks_correctness() {
        let p = parse_system(LRC).unwrap();
        let lift = block_lift(&p);
        let best = best_abstract_system(&p, &lift).unwrap();
        let mut lowered = best.matrix().clone();
        lowered.set(1, 1, CostValue::int(4));
        let broken = best.with_matrix(lowered).unwrap();
        assert_eq!(
            find_abstraction_violation(&p, &broken, &lift).unwrap(),
            Some(Violation::Transition {
                abstract_state: "B".into(),
                concrete_state: "b".into()
            })
        );
    }

    #[test]
    fn singleton_domain_sums_everything() {
        let p = parse_system(LRC).unwrap();
        let lift = lift_partition_indices(p.dioid().clone(), p.states(), &names(&["S"]), &[0, 0, 0, 0]).unwrap();
        assert_eq!(lift.alpha().render_boolean(), "e e e e\n");
        let best = best_abstract_system(&p, &lift).unwrap();
        assert_eq!(best.edge(0, 0), &CostValue::int(8));
    }

    #[test]
    fn corrupted_lifts_fail_galois() {
        let d = Arc::new(CostDioid::maxplus());
        let e = d.unit();
        let z = d.zero();
        let two_e = CostMatrix::from_rows(d.clone(), vec![vec![e.clone(), z.clone()], vec![e.clone(), e.clone()]]).unwrap();
        let lift = PartitionLift::from_alpha_matrix(names(&["x", "y"]), names(&["X", "Y"]), two_e).unwrap();
        assert!(!check_galois(&lift));
        let empty_col = CostMatrix::from_rows(d, vec![vec![e.clone(), z.clone()], vec![z.clone(), z]]).unwrap();
        let lift = PartitionLift::from_alpha_matrix(names(&["x", "y"]), names(&["X", "Y"]), empty_col).unwrap();
        assert!(!check_galois(&lift));
    }

    #[test]
    fn map_errors() {
        let d = Arc::new(CostDioid::maxplus());
        let conc = names(&["a", "b"]);
        let (abs, pairs) = parse_partition("map a -> A\n").unwrap();
        assert!(matches!(
            lift_partition(d.clone(), &conc, &abs, &pairs),
            Err(AbstractionError::PartialMap(s)) if s == "b"
        ));
        let (abs, pairs) = parse_partition("map a -> A\nmap z -> A\n").unwrap();
        assert!(matches!(
            lift_partition(d.clone(), &conc, &abs, &pairs),
            Err(AbstractionError::UnknownConcreteState(_))
        ));
        assert!(matches!(
            lift_partition(d, &conc, &names(&["A"]), &[("a".into(), "A".into()), ("b".into(), "Q".into())]),
            Err(AbstractionError::UnknownAbstractState(_))
        ));
        assert!(parse_partition("a -> A\n").is_err());
        assert!(parse_partition("map a A\n").is_err());
        assert!(parse_partition("map a -> A\nmap a -> B\n").is_err());
    }

    #[test]
    fn declared_abstract_order_wins() {
        let (abs, _) = parse_partition("abstract Y X\nmap a -> X\nmap b -> Y\n").unwrap();
        assert_eq!(abs, names(&["Y", "X"]));
    }
}
