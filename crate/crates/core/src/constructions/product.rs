use std::sync::Arc;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{ContinuityMode, DistFn, PhiFn, PhiMetricSpace, SpaceShape};

/// `d(x,y) = 0` if `x = y`, else `1`; `φ ≡ 0`.
pub fn discrete_space(dim: usize) -> PhiMetricSpace {
    assert!(dim >= 1, "a space needs dimension at least 1");
    PhiMetricSpace::new(
        "discrete",
        dim,
        |x, y| if x == y { 0.0 } else { 1.0 },
        |_, _, _| 0.0,
    )
    .with_modulus(|_| 1.0)
    .with_continuity(ContinuityMode::Either)
    .with_shape(SpaceShape {
        root_exponent: Some(1.0),
        local_phi_slope: Some(0.0),
    })
}

/// Two-factor expansion. With `aᵢ = dᵢ(x,z)`, `bᵢ = dᵢ(z,y)` and `φᵢ` the
/// factor perturbations, multiplying the two triangle bounds gives
///
/// `d₁d₂(x,y) ≤ a₁a₂ + b₁b₂ + a₁b₂ + a₂b₁ + φ₁(a₂+b₂) + φ₂(a₁+b₁) + φ₁φ₂`.
fn combine(acc: (f64, f64, f64), next: (f64, f64, f64)) -> (f64, f64, f64) {
    let (a1, b1, p1) = acc;
    let (a2, b2, p2) = next;
    let phi = a1 * b2 + a2 * b1 + p1 * (a2 + b2) + p2 * (a1 + b1) + p1 * p2;
    (a1 * a2, b1 * b2, phi)
}

fn fold_parts(spaces: &[PhiMetricSpace]) -> (DistFn, PhiFn) {
    let dists: Vec<DistFn> = spaces.iter().map(|s| s.dist_fn().clone()).collect();
    let phis: Vec<PhiFn> = spaces.iter().map(|s| s.phi_fn().clone()).collect();
    let dist_factors = dists.clone();
    let dist: DistFn = Arc::new(move |x: &Point, y: &Point| {
        let mut it = dist_factors.iter();
        let first = it.next().expect("nonempty")(x, y);
        it.fold(first, |acc, d| acc * d(x, y))
    });
    let phi: PhiFn = Arc::new(move |x: &Point, y: &Point, z: &Point| {
        let term = |i: usize| (dists[i](x, z), dists[i](z, y), phis[i](x, y, z));
        (1..dists.len())
            .fold(term(0), |acc, i| combine(acc, term(i)))
            .2
    });
    (dist, phi)
}

/// Pointwise product of the factor distances, with `φ` assembled by
/// left-folding the two-factor expansion.
///
/// The result uses [`ContinuityMode::Both`]: a discrete factor contributes
/// `a₂b₁ = b₁` once `z ≠ x`, so `φ` only vanishes when `z` approaches both
/// endpoints. No analytic modulus is attached.
pub fn product(spaces: &[PhiMetricSpace]) -> Result<PhiMetricSpace> {
    let first = spaces
        .first()
        .ok_or_else(|| Error::input("product of an empty list of spaces"))?;
    let mut domain = first.domain().clone();
    for s in &spaces[1..] {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
        domain = domain.intersect(s.domain())?;
    }
    if spaces.len() == 1 {
        return Ok(first.clone());
    }
    let (dist, phi) = fold_parts(spaces);
    let label = format!(
        "product({})",
        spaces
            .iter()
            .map(|s| s.label())
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(PhiMetricSpace::from_parts(label, first.dim(), dist, phi)
        .with_domain_value(domain)
        .with_continuity(ContinuityMode::Both))
}

/// `d' = d²` with `φ' = 2·d(x,z)·d(z,y) + φ² + 2φ·[d(x,z) + d(z,y)]`.
///
/// This is the two-factor product of a space with itself, so it keeps the
/// base space's continuity mode. If `d = m^q` then `d' = m^{2q}`, and a local
/// slope `L` for `φ` becomes `(L + 2)² − 2`.
pub fn square(space: &PhiMetricSpace) -> PhiMetricSpace {
    let pair = [space.clone(), space.clone()];
    let (dist, phi) = fold_parts(&pair);
    let base = space.shape();
    PhiMetricSpace::from_parts(format!("square({})", space.label()), space.dim(), dist, phi)
        .with_domain_value(space.domain().clone())
        .with_continuity(space.continuity())
        .with_shape(SpaceShape {
            root_exponent: base.root_exponent.map(|q| 2.0 * q),
            local_phi_slope: base.local_phi_slope.map(|l| (l + 2.0).powi(2) - 2.0),
        })
}
