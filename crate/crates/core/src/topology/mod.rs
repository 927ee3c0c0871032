//! Balls, diameters, ε-nets and cover refinement on finite point clouds.

mod cloud;
mod cover;
mod stone;

pub use cloud::{
    ball_members, ball_nesting_check, diameter, epsilon_net, product_ball_inclusion_check, Ball,
    BallKind, PointCloud,
};
pub use cover::{Cover, CoverSet};
pub use stone::{
    default_i_max, radius_factor, stone_refinement, stone_refinement_with, verify_refinement,
    CandidateRadius, Exclusion, RefinementCheck, RefinementFamily, RefinementMember,
    RefinementReport, RefinementViolation, StoneOptions, LITERAL_RADIUS_FACTOR,
};
