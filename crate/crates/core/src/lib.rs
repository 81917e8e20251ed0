//! Cost analysis of weighted transition systems over cost dioids.
//!
//! Costs live in a complete idempotent commutative semiring with an nth root.
//! Systems are square matrices over it; the global cost is read off the
//! transitive closure and the long-run cost off traces of matrix powers.
//! Abstractions are `{⊥, e}` matrices, either partition lifts or lifts of
//! Galois connections between finite lattices.

pub mod correct_linear;
pub mod cost_dioid;
pub mod error;
pub mod galois_lift;
pub mod longrun;
pub mod moduloid;
pub mod partition_abstraction;
pub mod transition_semantics;

pub use cost_dioid::{CostDioid, CostValue, DioidKind, Extended, VecCost};
pub use error::{AbstractionError, DioidError, LatticeError, LinearError, MatrixError, ParseError, SystemError};
pub use moduloid::{CostMatrix, CostVector};
pub use transition_semantics::{global_cost, parse_system, TransitionSystem};
pub use longrun::long_run_cost;
