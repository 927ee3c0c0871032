use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{BoxDomain, Point};
use crate::space::PhiMetricSpace;

/// A closed box of a nested family together with its diameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedSet {
    pub set: BoxDomain,
    pub diameter: f64,
}

/// Closed boxes `F₁ ⊇ F₂ ⊇ …`.
///
/// Diameters are taken over pairs of corners, which is exact for distances
/// that grow with every coordinate gap (all norm-based constructions).
#[derive(Clone, Debug)]
pub struct NestedFamily {
    space: PhiMetricSpace,
    sets: Vec<NestedSet>,
}

fn corner_diameter(space: &PhiMetricSpace, b: &BoxDomain) -> Result<f64> {
    let corners = b.corners();
    let mut d: f64 = 0.0;
    for p in &corners {
        for q in &corners {
            d = d.max(space.distance(p, q)?);
        }
    }
    Ok(d)
}

impl NestedFamily {
    /// Fails with [`Error::InvalidFamily`] when a set is not contained in its
    /// predecessor or a diameter increases.
    pub fn new(space: &PhiMetricSpace, sets: Vec<BoxDomain>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidFamily("no sets".into()));
        }
        let mut out: Vec<NestedSet> = Vec::with_capacity(sets.len());
        for (k, set) in sets.into_iter().enumerate() {
            if set.dim() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: set.dim(),
                });
            }
            let diameter = corner_diameter(space, &set)?;
            if let Some(prev) = out.last() {
                if !prev.set.encloses(&set) {
                    return Err(Error::InvalidFamily(format!(
                        "set {} is not contained in set {k}",
                        k + 1
                    )));
                }
                if diameter > prev.diameter {
                    return Err(Error::InvalidFamily(format!(
                        "diameter increases from {} to {diameter} at set {}",
                        prev.diameter,
                        k + 1
                    )));
                }
            }
            out.push(NestedSet { set, diameter });
        }
        Ok(NestedFamily {
            space: space.clone(),
            sets: out,
        })
    }

    /// Nested closed intervals `[aₖ, bₖ]` on a one-dimensional space.
    pub fn intervals(space: &PhiMetricSpace, bounds: &[(f64, f64)]) -> Result<Self> {
        let sets = bounds
            .iter()
            .map(|&(a, b)| BoxDomain::new(vec![a], vec![b]))
            .collect::<Result<Vec<_>>>()?;
        NestedFamily::new(space, sets)
    }

    pub fn sets(&self) -> &[NestedSet] {
        &self.sets
    }

    pub fn space(&self) -> &PhiMetricSpace {
        &self.space
    }
}

/// The single point common to all sets, approximated by the center of the
/// last set once its diameter is below `tol`.
///
/// [`Error::Inconclusive`] when the recorded diameters never drop below
/// `tol`; [`Error::InvalidFamily`] if the chosen point misses some set.
pub fn cantor_intersection(family: &NestedFamily, tol: f64) -> Result<Point> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let last = family.sets.last().expect("nonempty family");
    if last.diameter >= tol {
        return Err(Error::Inconclusive(format!(
            "smallest recorded diameter {} is not below {tol:e}",
            last.diameter
        )));
    }
    let p = last.set.center();
    if let Some(k) = family.sets.iter().position(|s| !s.set.contains(&p)) {
        return Err(Error::InvalidFamily(format!(
            "{p} lies outside set {}",
            k + 1
        )));
    }
    Ok(p)
}
