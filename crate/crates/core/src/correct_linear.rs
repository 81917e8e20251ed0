//! Correct linear abstractions between moduloids.
//!
//! A triple `(M, M♯, α₁)` with `α₁` a `{⊥, e}` matrix (rows: abstract basis,
//! columns: concrete basis) is correct when `α₁ M ≤ M♯ α₁` and the initial and
//! final states map into `I♯` and `F♯`. Correct triples over-approximate the
//! global cost, and in selective dioids the long-run cost.

use std::fmt;
use std::sync::Arc;

use crate::cost_dioid::{CostDioid, CostValue};
use crate::error::LinearError;
use crate::longrun::long_run_cost_matrix;
use crate::moduloid::CostMatrix;
use crate::partition_abstraction::PartitionLift;
use crate::transition_semantics::TransitionSystem;

/// Initial and final sets on both sides of a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoints {
    pub init: Vec<usize>,
    pub finals: Vec<usize>,
    pub abstract_init: Vec<usize>,
    pub abstract_finals: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearAbstractionTriple {
    concrete: CostMatrix,
    abstract_matrix: CostMatrix,
    alpha: CostMatrix,
    endpoints: Option<Endpoints>,
}

/// First reason a triple is not a correct linear abstraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearViolation {
    /// `(α₁ M)[row][col] ≤ (M♯ α₁)[row][col]` fails.
    Transition { row: usize, col: usize },
    /// Concrete state whose column of `α₁` is all `⊥`.
    Unmapped(usize),
    /// Initial state with an image outside `I♯`.
    Initial(usize),
    /// Final state with an image outside `F♯`.
    Final(usize),
}

impl fmt::Display for LinearViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearViolation::Transition { row, col } => {
                write!(f, "alpha*M exceeds M#*alpha at ({row}, {col})")
            }
            LinearViolation::Unmapped(s) => write!(f, "concrete state {s} has an empty image"),
            LinearViolation::Initial(s) => write!(f, "image of initial state {s} is not initial"),
            LinearViolation::Final(s) => write!(f, "image of final state {s} is not final"),
        }
    }
}

fn check_indices(ids: &[usize], bound: usize) -> Result<(), LinearError> {
    match ids.iter().find(|&&i| i >= bound) {
        Some(&i) => Err(LinearError::IndexOutOfRange(i)),
        None => Ok(()),
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl LinearAbstractionTriple {
    /// Validates shapes and that `α₁` is a `{⊥, e}` matrix.
    pub fn new(
        concrete: CostMatrix,
        abstract_matrix: CostMatrix,
        alpha: CostMatrix,
    ) -> Result<Self, LinearError> {
        let shape_ok = concrete.is_square()
            && abstract_matrix.is_square()
            && alpha.rows() == abstract_matrix.rows()
            && alpha.cols() == concrete.rows();
        if !shape_ok {
            return Err(LinearError::Shape {
                alpha_rows: alpha.rows(),
                alpha_cols: alpha.cols(),
                concrete: concrete.rows(),
                abstract_dim: abstract_matrix.rows(),
            });
        }
        if concrete.dioid() != abstract_matrix.dioid() || concrete.dioid() != alpha.dioid() {
            return Err(LinearError::Matrix(crate::error::MatrixError::DioidMismatch));
        }
        let d = alpha.dioid().clone();
        for r in 0..alpha.rows() {
            for c in 0..alpha.cols() {
                let x = alpha.get(r, c);
                if !d.is_zero(x) && *x != d.unit() {
                    return Err(LinearError::NonBooleanAlpha { row: r, col: c });
                }
            }
        }
        Ok(LinearAbstractionTriple {
            concrete,
            abstract_matrix,
            alpha,
            endpoints: None,
        })
    }

    /// Attaches initial/final sets on both sides.
    pub fn with_endpoints(mut self, endpoints: Endpoints) -> Result<Self, LinearError> {
        check_indices(&endpoints.init, self.concrete_dim())?;
        check_indices(&endpoints.finals, self.concrete_dim())?;
        check_indices(&endpoints.abstract_init, self.abstract_dim())?;
        check_indices(&endpoints.abstract_finals, self.abstract_dim())?;
        self.endpoints = Some(Endpoints {
            init: sorted(endpoints.init),
            finals: sorted(endpoints.finals),
            abstract_init: sorted(endpoints.abstract_init),
            abstract_finals: sorted(endpoints.abstract_finals),
        });
        Ok(self)
    }

    /// `M♯ = α₁ M α₁ᵀ` with `I♯`, `F♯` the images of `I`, `F` under `α₁`.
    pub fn best_composite(p: &TransitionSystem, alpha: CostMatrix) -> Result<Self, LinearError> {
        let m_sharp = alpha.mul(p.matrix())?.mul(&alpha.transpose())?;
        let t = LinearAbstractionTriple::new(p.matrix().clone(), m_sharp, alpha)?;
        let endpoints = Endpoints {
            init: p.init().to_vec(),
            finals: p.finals().to_vec(),
            abstract_init: t.image_of(p.init()),
            abstract_finals: t.image_of(p.finals()),
        };
        t.with_endpoints(endpoints)
    }

    /// The triple of a partition lift between two systems.
    pub fn from_partition(
        p: &TransitionSystem,
        p_sharp: &TransitionSystem,
        lift: &PartitionLift,
    ) -> Result<Self, LinearError> {
        LinearAbstractionTriple::new(p.matrix().clone(), p_sharp.matrix().clone(), lift.alpha().clone())?
            .with_endpoints(Endpoints {
                init: p.init().to_vec(),
                finals: p.finals().to_vec(),
                abstract_init: p_sharp.init().to_vec(),
                abstract_finals: p_sharp.finals().to_vec(),
            })
    }

    pub fn concrete(&self) -> &CostMatrix {
        &self.concrete
    }

    pub fn abstract_matrix(&self) -> &CostMatrix {
        &self.abstract_matrix
    }

    pub fn alpha(&self) -> &CostMatrix {
        &self.alpha
    }

    pub fn endpoints(&self) -> Option<&Endpoints> {
        self.endpoints.as_ref()
    }

    pub fn dioid(&self) -> &Arc<CostDioid> {
        self.concrete.dioid()
    }

    pub fn concrete_dim(&self) -> usize {
        self.concrete.rows()
    }

    pub fn abstract_dim(&self) -> usize {
        self.abstract_matrix.rows()
    }

    /// Abstract basis positions in the decomposition of `α₁(σ)`.
    pub fn decomposition(&self, sigma: usize) -> Vec<usize> {
        let d = self.dioid();
        (0..self.abstract_dim())
            .filter(|&a| !d.is_zero(self.alpha.get(a, sigma)))
            .collect()
    }

    /// Union of the decompositions of a set of concrete states.
    pub fn image_of(&self, states: &[usize]) -> Vec<usize> {
        sorted(states.iter().flat_map(|&s| self.decomposition(s)).collect())
    }

    /// Same triple with `M♯` replaced.
    pub fn with_abstract_matrix(&self, abstract_matrix: CostMatrix) -> Result<Self, LinearError> {
        let t = LinearAbstractionTriple::new(self.concrete.clone(), abstract_matrix, self.alpha.clone())?;
        match &self.endpoints {
            Some(e) => t.with_endpoints(e.clone()),
            None => Ok(t),
        }
    }

    fn require_selective(&self) -> Result<(), LinearError> {
        if self.dioid().is_selective() {
            Ok(())
        } else {
            Err(LinearError::NotSelective(self.dioid().kind()))
        }
    }
}

/// First violated condition of a triple.
pub fn find_linear_violation(t: &LinearAbstractionTriple) -> Option<LinearViolation> {
    let left = t.alpha.mul(&t.concrete).expect("shapes validated");
    let right = t.abstract_matrix.mul(&t.alpha).expect("shapes validated");
    if let Some((row, col)) = left.first_violation(&right).expect("shapes validated") {
        return Some(LinearViolation::Transition { row, col });
    }
    if let Some(s) = (0..t.concrete_dim()).find(|&s| t.decomposition(s).is_empty()) {
        return Some(LinearViolation::Unmapped(s));
    }
    let e = t.endpoints.as_ref()?;
    let escapes = |s: usize, allowed: &[usize]| t.decomposition(s).iter().any(|a| !allowed.contains(a));
    if let Some(&s) = e.init.iter().find(|&&s| escapes(s, &e.abstract_init)) {
        return Some(LinearViolation::Initial(s));
    }
    if let Some(&s) = e.finals.iter().find(|&&s| escapes(s, &e.abstract_finals)) {
        return Some(LinearViolation::Final(s));
    }
    None
}

pub fn check_correct_linear(t: &LinearAbstractionTriple) -> bool {
    find_linear_violation(t).is_none()
}

/// `⊕_{c: σ♯ ≤ α₁(c)} M[c][σ] ≤ ⊕_{a: a ≤ α₁(σ)} M♯[σ♯][a]`, both sides enumerated.
pub fn check_lemma_dev(t: &LinearAbstractionTriple, sigma_sharp: usize, sigma: usize) -> bool {
    let d = t.dioid();
    let left = d.sum(
        (0..t.concrete_dim())
            .filter(|&c| !d.is_zero(t.alpha.get(sigma_sharp, c)))
            .map(|c| t.concrete.get(c, sigma)),
    );
    let right = d.sum(
        t.decomposition(sigma)
            .into_iter()
            .map(|a| t.abstract_matrix.get(sigma_sharp, a)),
    );
    d.leq(&left, &right)
}

/// First `(σ♯, σ)` failing [`check_lemma_dev`].
pub fn lemma_dev_violation(t: &LinearAbstractionTriple) -> Option<(usize, usize)> {
    (0..t.abstract_dim())
        .flat_map(|a| (0..t.concrete_dim()).map(move |s| (a, s)))
        .find(|&(a, s)| !check_lemma_dev(t, a, s))
}

/// `α₁ Mᵏ ≤ (M♯)ᵏ α₁` for `k = 1..kmax`.
pub fn check_lemma_iterate(t: &LinearAbstractionTriple, kmax: u32) -> bool {
    lemma_iterate_violation(t, kmax).is_none()
}

/// First `k` at which powers break condition (1).
pub fn lemma_iterate_violation(t: &LinearAbstractionTriple, kmax: u32) -> Option<u32> {
    let mut m = t.concrete.clone();
    let mut m_sharp = t.abstract_matrix.clone();
    for k in 1..=kmax {
        if k > 1 {
            m = m.mul(&t.concrete).expect("square");
            m_sharp = m_sharp.mul(&t.abstract_matrix).expect("square");
        }
        let left = t.alpha.mul(&m).expect("shapes validated");
        let right = m_sharp.mul(&t.alpha).expect("shapes validated");
        if !left.leq(&right).expect("shapes validated") {
            return Some(k);
        }
    }
    None
}

fn powers(m: &CostMatrix, kmax: usize) -> Vec<CostMatrix> {
    let mut out = vec![m.clone()];
    while out.len() < kmax {
        let next = out.last().expect("nonempty").mul(m).expect("square");
        out.push(next);
    }
    out
}

/// For every closed walk cost `Mᵏ[σ][σ] ≠ ⊥` and every `σ♯ᵢ` in the
/// decomposition of `α₁(σ)`, some `σ♯ⱼ` there has `(M♯)ᵏ[σ♯ᵢ][σ♯ⱼ] ≥ Mᵏ[σ][σ]`.
pub fn check_lemma_path(t: &LinearAbstractionTriple, kmax: usize) -> Result<bool, LinearError> {
    Ok(lemma_path_violation(t, kmax)?.is_none())
}

/// First `(σ, k, σ♯ᵢ)` without a successor `σ♯ⱼ`.
pub fn lemma_path_violation(
    t: &LinearAbstractionTriple,
    kmax: usize,
) -> Result<Option<(usize, usize, usize)>, LinearError> {
    t.require_selective()?;
    let d = t.dioid();
    let m_pow = powers(&t.concrete, kmax);
    let s_pow = powers(&t.abstract_matrix, kmax);
    for sigma in 0..t.concrete_dim() {
        let parts = t.decomposition(sigma);
        for k in 1..=kmax {
            let cost = m_pow[k - 1].get(sigma, sigma);
            if d.is_zero(cost) {
                continue;
            }
            for &i in &parts {
                if !parts.iter().any(|&j| d.leq(cost, s_pow[k - 1].get(i, j))) {
                    return Ok(Some((sigma, k, i)));
                }
            }
        }
    }
    Ok(None)
}

/// `(j, r)` with `ᵏ√(Mᵏ[σ][σ]) ≤ ᵏʳ√((M♯)ᵏʳ[σ♯ⱼ][σ♯ⱼ])`, searching `r ≤ s`
/// where `s` is the size of the decomposition of `α₁(σ)`.
pub fn lemma_cycle_witness(
    t: &LinearAbstractionTriple,
    sigma: usize,
    k: usize,
) -> Result<Option<(usize, usize)>, LinearError> {
    t.require_selective()?;
    if k == 0 || sigma >= t.concrete_dim() {
        return Err(LinearError::IndexOutOfRange(sigma.max(k)));
    }
    let d = t.dioid();
    let cost = t.concrete.power(k as u32)?.get(sigma, sigma).clone();
    let mean = d.nth_root(&cost, k as u32).map_err(crate::error::MatrixError::from)?;
    let parts = t.decomposition(sigma);
    let step = t.abstract_matrix.power(k as u32)?;
    let mut acc = step.clone();
    for r in 1..=parts.len() {
        if r > 1 {
            acc = acc.mul(&step)?;
        }
        for &j in &parts {
            let abstract_mean = d
                .nth_root(acc.get(j, j), (k * r) as u32)
                .map_err(crate::error::MatrixError::from)?;
            if d.approx_leq(&mean, &abstract_mean) {
                return Ok(Some((j, r)));
            }
        }
    }
    Ok(None)
}

/// Every closed walk with `k ≤ kmax` has a witness from [`lemma_cycle_witness`].
pub fn check_lemma_cycle(t: &LinearAbstractionTriple, kmax: usize) -> Result<bool, LinearError> {
    Ok(lemma_cycle_violation(t, kmax)?.is_none())
}

/// First `(σ, k)` without a witness.
pub fn lemma_cycle_violation(
    t: &LinearAbstractionTriple,
    kmax: usize,
) -> Result<Option<(usize, usize)>, LinearError> {
    t.require_selective()?;
    let d = t.dioid();
    let m_pow = powers(&t.concrete, kmax);
    for sigma in 0..t.concrete_dim() {
        for k in 1..=kmax {
            if d.is_zero(m_pow[k - 1].get(sigma, sigma)) {
                continue;
            }
            if lemma_cycle_witness(t, sigma, k)?.is_none() {
                return Ok(Some((sigma, k)));
            }
        }
    }
    Ok(None)
}

/// gc and ρ on both sides of a triple.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    /// `(gc(M), gc(M♯))` when endpoints are attached.
    pub gc: Option<(CostValue, CostValue)>,
    pub gc_holds: Option<bool>,
    /// `(ρ(M), ρ(M♯))` over all states.
    pub rho: (CostValue, CostValue),
    pub rho_holds: bool,
    /// The ρ inequality is only a theorem in selective dioids; otherwise it is recorded, not asserted.
    pub rho_asserted: bool,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.gc_holds.unwrap_or(true) && (self.rho_holds || !self.rho_asserted)
    }
}

fn gc_of(m: &CostMatrix, init: &[usize], finals: &[usize]) -> Result<CostValue, LinearError> {
    let closure = m.kleene_plus()?;
    let d = m.dioid();
    Ok(d.sum(
        init.iter()
            .flat_map(|&i| finals.iter().map(move |&f| (i, f)))
            .map(|(i, f)| closure.get(i, f)),
    ))
}

/// Computes gc and ρ on both sides and compares them.
pub fn check_theorems(t: &LinearAbstractionTriple) -> Result<TheoremReport, LinearError> {
    let d = t.dioid();
    let gc = match &t.endpoints {
        Some(e) => Some((
            gc_of(&t.concrete, &e.init, &e.finals)?,
            gc_of(&t.abstract_matrix, &e.abstract_init, &e.abstract_finals)?,
        )),
        None => None,
    };
    let gc_holds = gc.as_ref().map(|(c, a)| d.leq(c, a));
    let rho = (
        long_run_cost_matrix(&t.concrete)?,
        long_run_cost_matrix(&t.abstract_matrix)?,
    );
    let rho_holds = d.approx_leq(&rho.0, &rho.1);
    Ok(TheoremReport {
        gc,
        gc_holds,
        rho,
        rho_holds,
        rho_asserted: d.is_selective(),
    })
}
