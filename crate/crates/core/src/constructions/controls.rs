//! Spaces that deliberately break an axiom, for exercising the checkers.

use crate::point::BoxDomain;
use crate::space::{ContinuityMode, PhiMetricSpace};

/// Squared Euclidean distance with `φ ≡ 0`; fails the triangle inequality
/// (`x = 0, y = 2, z = 1` gives `4 > 1 + 1`).
pub fn broken_phi_zero(domain: BoxDomain) -> PhiMetricSpace {
    PhiMetricSpace::new(
        "broken-phi-zero",
        domain.dim(),
        |x, y| {
            x.coords()
                .iter()
                .zip(y.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        },
        |_, _, _| 0.0,
    )
    .with_domain(domain)
    .with_modulus(|_| 1.0)
}

/// `|x − y|` on the line with `φ = 1` whenever `z ∉ {x, y}`. The triangle
/// inequality holds, but `φ` does not vanish as `z` approaches an endpoint.
pub fn phi_jump(lo: f64, hi: f64) -> PhiMetricSpace {
    PhiMetricSpace::new(
        "phi-jump",
        1,
        |x, y| (x.x() - y.x()).abs(),
        |x, y, z| if z == x || z == y { 0.0 } else { 1.0 },
    )
    .with_domain(BoxDomain::cube(1, lo, hi).expect("valid interval"))
    .with_continuity(ContinuityMode::Either)
}
