//! Seeded random systems and abstractions.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropicost_core::{CostDioid, CostMatrix, CostValue, DioidKind, Extended, TransitionSystem, VecCost};

use crate::OracleError;

/// How edge costs are drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CostSampler {
    /// `p/q` with `p` in `numer_min..=numer_max` and `q` in `1..=max_denom`,
    /// clamped into the carrier.
    Rational {
        numer_min: i64,
        numer_max: i64,
        max_denom: i64,
    },
    /// Random non-⊥ subsets of the universe.
    Subsets,
}

impl CostSampler {
    /// Small rationals (numerators −10..10, denominators 1..4) for numeric
    /// carriers, subsets for set carriers.
    pub fn default_for(kind: DioidKind) -> Self {
        match kind {
            DioidKind::CupCap | DioidKind::CapCup => CostSampler::Subsets,
            _ => CostSampler::Rational {
                numer_min: -10,
                numer_max: 10,
                max_denom: 4,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomSystemSpec {
    pub states: usize,
    /// Probability that any ordered pair of states carries an edge.
    pub density: f64,
    pub sampler: CostSampler,
    pub dioid: Arc<CostDioid>,
    pub seed: u64,
}

impl RandomSystemSpec {
    pub fn new(dioid: Arc<CostDioid>, states: usize, density: f64, seed: u64) -> Self {
        RandomSystemSpec {
            states,
            density,
            sampler: CostSampler::default_for(dioid.kind()),
            dioid,
            seed,
        }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.states == 0 {
            return Err(OracleError::InvalidSpec("at least one state is required".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(OracleError::InvalidSpec(format!("density {} is outside [0, 1]", self.density)));
        }
        match (&self.sampler, self.dioid.kind()) {
            (CostSampler::Subsets, DioidKind::CupCap | DioidKind::CapCup) => {
                if self.dioid.universe().is_empty() {
                    return Err(OracleError::InvalidSpec("set dioid with an empty universe".into()));
                }
            }
            (CostSampler::Rational { numer_min, numer_max, max_denom }, k) if k != DioidKind::CupCap && k != DioidKind::CapCup => {
                if numer_min > numer_max || *max_denom < 1 {
                    return Err(OracleError::InvalidSpec("empty rational range".into()));
                }
            }
            (sampler, kind) => {
                return Err(OracleError::InvalidSpec(format!("sampler {sampler:?} does not fit {kind}")));
            }
        }
        Ok(())
    }
}

/// Deterministic generator for trial `index` of a run seeded with `master`.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

fn rational(rng: &mut impl Rng, lo: i64, hi: i64, max_denom: i64) -> BigRational {
    let p = rng.gen_range(lo..=hi);
    let q = rng.gen_range(1..=max_denom);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A non-⊥ carrier element.
pub fn random_value(dioid: &CostDioid, sampler: &CostSampler, rng: &mut impl Rng) -> CostValue {
    match (sampler, dioid.kind()) {
        (CostSampler::Subsets, kind) => {
            let width = dioid.universe().len();
            let full = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            loop {
                let mask = rng.next_u64() & full;
                let is_bottom = match kind {
                    DioidKind::CapCup => mask == full,
                    _ => mask == 0,
                };
                if !is_bottom {
                    return CostValue::Set(mask);
                }
            }
        }
        (CostSampler::Rational { numer_min, numer_max, max_denom }, DioidKind::MaxTimes) => {
            // Strictly positive, so never ⊥ = 0.
            let hi = (*numer_max).max(1);
            let lo = (*numer_min).max(1).min(hi);
            CostValue::Scalar(Extended::Finite(rational(rng, lo, hi, *max_denom)))
        }
        (CostSampler::Rational { numer_min, numer_max, max_denom }, DioidKind::MinPlusVec(m)) => {
            let hi = (*numer_max).max(0);
            let lo = (*numer_min).max(0).min(hi);
            CostValue::Vector(VecCost::Finite(
                (0..m).map(|_| rational(rng, lo, hi, *max_denom)).collect(),
            ))
        }
        (CostSampler::Rational { numer_min, numer_max, max_denom }, _) => {
            CostValue::Scalar(Extended::Finite(rational(rng, *numer_min, *numer_max, *max_denom)))
        }
    }
}

fn nonempty_subset(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut picked: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if picked.is_empty() {
        picked.push(rng.gen_range(0..n));
    }
    picked
}

/// A pseudorandom system fully determined by `spec`.
pub fn random_system(spec: &RandomSystemSpec) -> Result<TransitionSystem, OracleError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.states;
    let d = spec.dioid.clone();
    let mut m = CostMatrix::zero(d.clone(), n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(spec.density) {
                m.set(i, j, random_value(&d, &spec.sampler, &mut rng));
            }
        }
    }
    let states = (0..n).map(|i| format!("s{i}")).collect();
    let init = nonempty_subset(&mut rng, n);
    let finals = nonempty_subset(&mut rng, n);
    TransitionSystem::new(states, m, init, finals).map_err(|e| OracleError::InvalidSpec(e.to_string()))
}

/// Block index per state, using every block in `0..blocks` at least once.
pub fn random_partition(rng: &mut impl RngCore, states: usize, blocks: usize) -> Vec<usize> {
    assert!(blocks >= 1 && blocks <= states, "need 1 <= blocks <= states");
    let mut assignment: Vec<usize> = (0..states).map(|s| if s < blocks { s } else { rng.gen_range(0..blocks) }).collect();
    assignment.shuffle(rng);
    assignment
}

/// A `rows × cols` `{⊥, e}` matrix with at least one `e` in every column.
pub fn random_alpha(dioid: &Arc<CostDioid>, rng: &mut impl RngCore, rows: usize, cols: usize, density: f64) -> CostMatrix {
    assert!(rows >= 1, "at least one abstract state");
    let mut alpha = CostMatrix::zero(dioid.clone(), rows, cols);
    for c in 0..cols {
        let forced = rng.gen_range(0..rows);
        for r in 0..rows {
            if r == forced || rng.gen_bool(density) {
                alpha.set(r, c, dioid.unit());
            }
        }
    }
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maxplus() -> Arc<CostDioid> {
        Arc::new(CostDioid::maxplus())
    }

    #[test]
    fn deterministic() {
        let spec = RandomSystemSpec::new(maxplus(), 5, 0.5, 42);
        assert_eq!(random_system(&spec).unwrap(), random_system(&spec).unwrap());
        let other = RandomSystemSpec { seed: 43, ..spec.clone() };
        assert_ne!(random_system(&spec).unwrap(), random_system(&other).unwrap());
    }

    #[test]
    fn density_extremes() {
        let empty = random_system(&RandomSystemSpec::new(maxplus(), 4, 0.0, 1)).unwrap();
        assert_eq!(empty.matrix(), &CostMatrix::zero(maxplus(), 4, 4));
        let full = random_system(&RandomSystemSpec::new(maxplus(), 3, 1.0, 1)).unwrap();
        let d = full.dioid().clone();
        let edges = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&(i, j)| !d.is_zero(full.edge(i, j))).count();
        assert_eq!(edges, 9);
    }

    #[test]
    fn values_stay_in_carrier() {
        let universe: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let kinds = [
            CostDioid::new(DioidKind::MinMax, None).unwrap(),
            CostDioid::new(DioidKind::MaxMin, None).unwrap(),
            CostDioid::new(DioidKind::CapCup, Some(universe.clone())).unwrap(),
            CostDioid::new(DioidKind::CupCap, Some(universe)).unwrap(),
            CostDioid::new(DioidKind::MinPlusVec(3), None).unwrap(),
            CostDioid::new(DioidKind::MaxTimes, None).unwrap(),
            CostDioid::maxplus(),
            CostDioid::minplus(),
        ];
        let mut rng = trial_rng(7, 0);
        for d in kinds {
            let sampler = CostSampler::default_for(d.kind());
            for _ in 0..200 {
                let v = random_value(&d, &sampler, &mut rng);
                assert!(d.contains(&v), "{v:?} in {}", d.kind());
                assert!(!d.is_zero(&v));
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(random_system(&RandomSystemSpec::new(maxplus(), 0, 0.5, 1)).is_err());
        assert!(random_system(&RandomSystemSpec::new(maxplus(), 2, 1.5, 1)).is_err());
        let spec = RandomSystemSpec {
            sampler: CostSampler::Subsets,
            ..RandomSystemSpec::new(maxplus(), 2, 0.5, 1)
        };
        assert!(random_system(&spec).is_err());
    }

    #[test]
    fn partitions_and_alphas() {
        let mut rng = trial_rng(3, 1);
        for _ in 0..100 {
            let part = random_partition(&mut rng, 6, 3);
            for b in 0..3 {
                assert!(part.contains(&b));
            }
            let alpha = random_alpha(&maxplus(), &mut rng, 3, 5, 0.3);
            for c in 0..5 {
                assert!(!alpha.column(c).support().is_empty());
            }
        }
    }

    #[test]
    fn trial_streams_differ() {
        let a = trial_rng(1, 0).next_u64();
        let b = trial_rng(1, 1).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(1, 0).next_u64());
    }
}
