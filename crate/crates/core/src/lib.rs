//! φ-metric spaces.
//!
//! A φ-metric is a distance `d` whose triangle inequality carries an additive
//! perturbation:
//!
//! ```text
//! d(x, y) ≤ d(x, z) + d(z, y) + φ(x, y, z)
//! ```
//!
//! where `φ` vanishes when `z` is `x` or `y`, is symmetric in `x` and `y`,
//! and becomes small as `z` approaches `x` or `y`. The squared Euclidean
//! distance is the standard example, with `φ = 2·√(d(x,z)·d(z,y))`.
//!
//! The crate provides
//!
//! - [`PhiMetricSpace`] and constructions from metrics, S-metrics,
//!   b-metrics, ℓp quasi-norms and products ([`constructions`]);
//! - sampled axiom checks and continuity moduli ([`axioms`]);
//! - balls, diameters, ε-nets and the level-indexed cover refinement on
//!   finite clouds ([`topology`]);
//! - convergence and Cauchy tests on finite traces, nested families
//!   ([`sequences`]);
//! - Banach, Kannan and Edelstein solvers with contraction certificates
//!   ([`fixedpoint`]).
//!
//! ```
//! use phimetric::{squared_euclidean, BoxDomain, Point};
//!
//! let space = squared_euclidean(BoxDomain::cube(1, -10.0, 10.0).unwrap());
//! let (x, y, z) = (Point::scalar(0.0), Point::scalar(2.0), Point::scalar(1.0));
//! assert_eq!(space.distance(&x, &y).unwrap(), 4.0);
//! // 4 ≤ 1 + 1 + 2
//! assert_eq!(space.phi_term(&x, &y, &z).unwrap(), 2.0);
//! ```

pub mod axioms;
pub mod constructions;
pub mod error;
pub mod fixedpoint;
pub mod point;
pub mod report;
pub mod sampler;
pub mod sequences;
pub mod space;
pub mod topology;

pub use axioms::{
    check_axioms, check_phi_continuity, estimate_modulus, AxiomId, AxiomReport, Verdict,
};
pub use constructions::{
    discrete_space, from_b_metric, from_metric, from_metric_squared, from_s_metric,
    from_strong_b_metric, lp_metric_squared_space, lp_quasinorm_space, product, square,
    squared_euclidean, BMetricSpec, Metric, Recipe, SMetricSpec,
};
pub use error::{Error, Result};
pub use fixedpoint::{
    banach_solve, certify, edelstein_solve, kannan_solve, rate_bound_check, ContractionKind,
    FixedPointResult, SelfMap,
};
pub use point::{BoxDomain, Domain, Point};
pub use sampler::Sampler;
pub use sequences::{
    cantor_intersection, converges_to, is_bounded, is_cauchy, NestedFamily, Trace,
};
pub use space::{ContinuityMode, PhiMetricSpace, SpaceShape};
pub use topology::{
    ball_members, diameter, epsilon_net, stone_refinement, verify_refinement, Ball, Cover,
    PointCloud,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/topology.md")]
    mod topology {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/fixedpoint.md")]
    mod fixedpoint {}
}
