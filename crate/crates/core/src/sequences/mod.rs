//! Convergence, Cauchy and boundedness tests on recorded sequences, and
//! nested closed sets.

mod analysis;
mod nested;
mod trace;

pub use analysis::{
    converges_to, distance_limit_check, is_bounded, is_cauchy, limit_uniqueness_constant,
    BoundResult, TailResult,
};
pub use nested::{cantor_intersection, NestedFamily, NestedSet};
pub use trace::{Trace, TraceRecord};
