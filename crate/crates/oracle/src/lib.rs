//! Brute-force oracles for tropicost.
//!
//! Everything here is computed by explicit enumeration of walks or of finite
//! domains, using only the carrier operations of [`CostDioid`](tropicost_core::CostDioid). Matrix
//! products, closures, long-run costs and residuals from the analytic side are
//! never called.

pub mod laws;
pub mod random;
pub mod subsolution;
pub mod walks;

use std::fmt;

pub use laws::{check_laws, is_non_selective_witness, random_element};
pub use random::{random_alpha, random_partition, random_system, random_value, trial_rng, CostSampler, RandomSystemSpec};
pub use subsolution::{boolean_vectors, greatest_subsolution, ExplicitMap};
pub use walks::{
    closure_oracle, cycle_means_oracle, enumerate_paths, power_oracle, reachable_from, simple_cycle_means,
    simple_cycles, Budget,
};

/// Default number of walk extensions an oracle query may perform.
pub const DEFAULT_WALK_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_WALK_BUDGET`].
pub const WALK_BUDGET_ENV: &str = "TROPICOST_WALK_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    BudgetExceeded { budget: u64 },
    /// A non-⊤ closure entry kept changing past the walk-length bound.
    NotStabilized { row: usize, col: usize },
    InvalidSpec(String),
    Dioid(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BudgetExceeded { budget } => {
                write!(f, "walk budget of {budget} exceeded (set {WALK_BUDGET_ENV} to raise it)")
            }
            OracleError::NotStabilized { row, col } => {
                write!(f, "closure entry ({row}, {col}) did not stabilize")
            }
            OracleError::InvalidSpec(msg) => write!(f, "invalid random system spec: {msg}"),
            OracleError::Dioid(msg) => write!(f, "dioid error: {msg}"),
        }
    }
}

impl std::error::Error for OracleError {}
