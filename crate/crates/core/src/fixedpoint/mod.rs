//! Picard iteration for Banach, Kannan and Edelstein maps, sampled
//! contraction certificates and the geometric rate bound.

mod certify;
mod maps;
mod rate;
mod solve;

pub use certify::{certify, ContractionCertificate, PairWitness, MAX_CERT_WITNESSES};
pub use maps::{ContractionKind, MapFn, SelfMap};
pub use rate::{rate_bound_check, RateReport, RateViolation};
pub use solve::{
    banach_solve, edelstein_solve, iterate, kannan_solve, multi_start, random_starts, solve,
    FailureReason, FixedPointReport, FixedPointResult, MultiStartReport, SolveFailure,
    DEFAULT_MAX_ITER, DEFAULT_SOLVER_TOL,
};
