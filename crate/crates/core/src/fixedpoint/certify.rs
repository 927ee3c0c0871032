use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ContractionKind, SelfMap};
use crate::error::{Error, Result};
use crate::point::{Domain, Point};
use crate::sampler::Sampler;
use crate::space::PhiMetricSpace;

/// Violating pairs kept in a certificate; the full count is recorded.
pub const MAX_CERT_WITNESSES: usize = 64;

/// A sampled pair with its ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub x: Point,
    pub y: Point,
    pub ratio: f64,
}

/// Sampled evidence about a contraction condition. Nothing here is a proof;
/// `k_estimate` is the largest ratio seen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub kind: ContractionKind,
    pub map: String,
    /// Largest observed ratio:
    /// banach `d(Tx,Ty)/d(x,y)`, kannan `d(Tx,Ty)/[d(x,Tx)+d(y,Ty)]`,
    /// edelstein `d(Tx,Ty)/d(x,y)`.
    pub k_estimate: f64,
    pub worst: Option<PairWitness>,
    /// Pairs with a positive denominator.
    pub samples: usize,
    /// Pairs breaking the condition: ratio ≥ 1 (banach), ≥ 1/2 (kannan),
    /// `d(Tx,Ty) ≥ d(x,y)` (edelstein). At most [`MAX_CERT_WITNESSES`].
    pub violations: Vec<PairWitness>,
    pub violation_count: usize,
}

impl ContractionCertificate {
    pub fn passes(&self) -> bool {
        self.violation_count == 0
    }

    /// `α = k/(1−k)`, the step ratio a Kannan map with this `k` guarantees.
    pub fn kannan_alpha(&self) -> Option<f64> {
        (self.kind == ContractionKind::Kannan && self.k_estimate < 0.5)
            .then(|| self.k_estimate / (1.0 - self.k_estimate))
    }
}

fn limit(kind: ContractionKind) -> f64 {
    match kind {
        ContractionKind::Banach | ContractionKind::Edelstein => 1.0,
        ContractionKind::Kannan => 0.5,
    }
}

/// Samples `sampler.count` pairs of distinct points from the map's domain
/// and evaluates the condition for `kind`.
///
/// Fails with [`Error::DegenerateMap`] when no pair has a positive
/// denominator, and with [`Error::Precondition`] when the map sends a sample
/// outside its domain.
pub fn certify(
    space: &PhiMetricSpace,
    map: &SelfMap,
    sampler: &Sampler,
    kind: ContractionKind,
) -> Result<ContractionCertificate> {
    if space.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: map.dim(),
        });
    }
    let mut stream = sampler.stream(map.dim(), &Domain::Box(map.domain().clone()))?;
    let mut pairs = Vec::with_capacity(sampler.count);
    let mut draws = 0usize;
    while pairs.len() < sampler.count {
        let x = stream.next_point()?;
        let y = stream.next_point()?;
        draws += 1;
        if x != y {
            pairs.push((x, y));
        } else if draws > 4 * sampler.count + 16 {
            break;
        }
    }
    let evaluated: Vec<Result<Option<PairWitness>>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let tx = map.apply_inside(x)?;
            let ty = map.apply_inside(y)?;
            let num = space.distance(&tx, &ty)?;
            let den = match kind {
                ContractionKind::Banach | ContractionKind::Edelstein => space.distance(x, y)?,
                ContractionKind::Kannan => space.distance(x, &tx)? + space.distance(y, &ty)?,
            };
            Ok((den > 0.0).then(|| PairWitness {
                x: x.clone(),
                y: y.clone(),
                ratio: num / den,
            }))
        })
        .collect();

    let bound = limit(kind);
    let mut samples = 0;
    let mut worst: Option<PairWitness> = None;
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for w in evaluated {
        let Some(w) = w? else { continue };
        samples += 1;
        if w.ratio >= bound {
            violation_count += 1;
            if violations.len() < MAX_CERT_WITNESSES {
                violations.push(w.clone());
            }
        }
        if worst.as_ref().is_none_or(|b| w.ratio > b.ratio) {
            worst = Some(w);
        }
    }
    let Some(worst) = worst else {
        return Err(Error::DegenerateMap);
    };
    Ok(ContractionCertificate {
        kind,
        map: map.label().to_owned(),
        k_estimate: worst.ratio,
        worst: Some(worst),
        samples,
        violations,
        violation_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::squared_euclidean;
    use crate::point::BoxDomain;

    fn sq() -> PhiMetricSpace {
        squared_euclidean(BoxDomain::cube(1, -10.0, 10.0).unwrap())
    }

    #[test]
    fn half_sine_quarter() {
        let c = certify(
            &sq(),
            &SelfMap::half_sine(),
            &Sampler::uniform(1, 4000),
            ContractionKind::Banach,
        )
        .unwrap();
        assert!(c.k_estimate <= 0.25 + 1e-12 && c.k_estimate > 0.2);
        assert!(c.passes());
        assert_eq!(c.samples, 4000);
    }

    #[test]
    fn identity_is_degenerate_for_kannan() {
        let id = SelfMap::affine(1.0, 0.0, BoxDomain::cube(1, -1.0, 1.0).unwrap());
        assert!(matches!(
            certify(
                &sq(),
                &id,
                &Sampler::uniform(1, 100),
                ContractionKind::Kannan
            ),
            Err(Error::DegenerateMap)
        ));
    }

    #[test]
    fn reflection_violates_edelstein() {
        let r = SelfMap::affine(-1.0, 0.0, BoxDomain::cube(1, -1.0, 1.0).unwrap());
        let c = certify(
            &sq(),
            &r,
            &Sampler::uniform(5, 300),
            ContractionKind::Edelstein,
        )
        .unwrap();
        assert_eq!(c.violation_count, 300);
        assert_eq!(c.violations.len(), MAX_CERT_WITNESSES);
        assert!(!c.passes());
    }

    #[test]
    fn deterministic() {
        let s = Sampler::uniform(9, 500);
        let a = certify(
            &sq(),
            &SelfMap::kannan_piecewise(),
            &s,
            ContractionKind::Kannan,
        )
        .unwrap();
        let b = certify(
            &sq(),
            &SelfMap::kannan_piecewise(),
            &s,
            ContractionKind::Kannan,
        )
        .unwrap();
        assert_eq!(a, b);
        assert!((a.kannan_alpha().unwrap() - a.k_estimate / (1.0 - a.k_estimate)).abs() < 1e-15);
    }
}
