//! Factories for φ-metric spaces.

pub mod controls;
mod induced;
mod metric;
mod product;
mod recipe;
mod squared;

pub use induced::{
    from_b_metric, from_s_metric, from_strong_b_metric, lp_metric_squared_space,
    lp_quasinorm_space, BMetricSpec, SFn, SMetricSpec, SpecViolation,
};
pub use metric::Metric;
pub use product::{discrete_space, product, square};
pub use recipe::Recipe;
pub use squared::{from_metric, from_metric_squared, squared_euclidean};
