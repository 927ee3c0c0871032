//! The φ-metric abstraction.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{BoxDomain, Domain, Point};

pub type DistFn = Arc<dyn Fn(&Point, &Point) -> f64 + Send + Sync>;
pub type PhiFn = Arc<dyn Fn(&Point, &Point, &Point) -> f64 + Send + Sync>;
pub type ModulusFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which closeness hypothesis a space's continuity modulus witnesses.
///
/// `Either` is the general φ3 form: `φ(x,y,z) < ε` as soon as `d(x,z) < δ`
/// *or* `d(y,z) < δ`. `Both` asks for `d(x,z) < δ` *and* `d(y,z) < δ`; it is
/// the form established for the spaces induced by S-metrics and b-metrics,
/// whose perturbation `c·[d(x,z) + d(y,z)]` cannot be small while one of the
/// two distances stays large.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuityMode {
    Either,
    Both,
}

impl ContinuityMode {
    /// The distance the mode conditions on: the smaller of the two for
    /// `Either`, the larger for `Both`.
    pub fn conditioning(self, d_xz: f64, d_yz: f64) -> f64 {
        match self {
            ContinuityMode::Either => d_xz.min(d_yz),
            ContinuityMode::Both => d_xz.max(d_yz),
        }
    }
}

/// Structural facts a constructor knows about the space it builds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpaceShape {
    /// `Some(q)` when `dist = m^q` for a genuine metric `m`.
    pub root_exponent: Option<f64>,
    /// `Some(L)` when `φ(x,y,z) ≤ L·t` whenever `d(x,z) < t` and `d(y,z) < t`.
    pub local_phi_slope: Option<f64>,
}

/// A φ-metric space: a distance `d`, its perturbation `φ`, and an optional
/// analytic continuity modulus `ε ↦ δ(ε)`.
///
/// The axioms the pair is expected to satisfy are
///
/// * `d(x,y) = 0 ⇔ x = y` and `d(x,y) = d(y,x)`;
/// * `d(x,y) ≤ d(x,z) + d(z,y) + φ(x,y,z)`;
/// * `φ(x,y,z) = 0` when `z ∈ {x, y}` and `φ(x,y,z) = φ(y,x,z)`;
/// * `φ(x,y,z) < ε` once `z` is within `δ(ε)` of the endpoints, in the sense
///   given by the space's [`ContinuityMode`].
///
/// Spaces are immutable and cheap to clone; evaluators are shared behind
/// `Arc` and must be pure.
#[derive(Clone)]
pub struct PhiMetricSpace {
    label: String,
    dim: usize,
    domain: Domain,
    dist: DistFn,
    phi: PhiFn,
    modulus: Option<ModulusFn>,
    continuity: ContinuityMode,
    shape: SpaceShape,
}

impl fmt::Debug for PhiMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiMetricSpace")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("analytic_modulus", &self.modulus.is_some())
            .field("continuity", &self.continuity)
            .field("shape", &self.shape)
            .finish()
    }
}

impl PhiMetricSpace {
    pub fn new<D, P>(label: impl Into<String>, dim: usize, dist: D, phi: P) -> Self
    where
        D: Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
        P: Fn(&Point, &Point, &Point) -> f64 + Send + Sync + 'static,
    {
        assert!(dim >= 1, "a space needs dimension at least 1");
        PhiMetricSpace {
            label: label.into(),
            dim,
            domain: Domain::Unbounded,
            dist: Arc::new(dist),
            phi: Arc::new(phi),
            modulus: None,
            continuity: ContinuityMode::Either,
            shape: SpaceShape::default(),
        }
    }

    pub(crate) fn from_parts(label: String, dim: usize, dist: DistFn, phi: PhiFn) -> Self {
        PhiMetricSpace {
            label,
            dim,
            domain: Domain::Unbounded,
            dist,
            phi,
            modulus: None,
            continuity: ContinuityMode::Either,
            shape: SpaceShape::default(),
        }
    }

    pub fn with_modulus<M>(mut self, modulus: M) -> Self
    where
        M: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.modulus = Some(Arc::new(modulus));
        self
    }

    pub fn without_modulus(mut self) -> Self {
        self.modulus = None;
        self
    }

    pub fn with_domain(mut self, domain: BoxDomain) -> Self {
        assert_eq!(domain.dim(), self.dim, "domain dimension must match space");
        self.domain = Domain::Box(domain);
        self
    }

    pub(crate) fn with_domain_value(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_continuity(mut self, mode: ContinuityMode) -> Self {
        self.continuity = mode;
        self
    }

    pub fn with_shape(mut self, shape: SpaceShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn continuity(&self) -> ContinuityMode {
        self.continuity
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn has_analytic_modulus(&self) -> bool {
        self.modulus.is_some()
    }

    /// `δ(ε)` from the analytic modulus, if the space carries one.
    pub fn modulus(&self, eps: f64) -> Option<f64> {
        self.modulus.as_ref().map(|m| m(eps))
    }

    /// `d(x, y)`.
    ///
    /// Fails on a dimension mismatch or when the evaluator returns a value
    /// that is negative or not finite.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        x.ensure_dim(self.dim)?;
        y.ensure_dim(self.dim)?;
        let v = (self.dist)(x, y);
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                what: "distance",
                points: vec![x.clone(), y.clone()],
                value: v,
            })
        }
    }

    /// `φ(x, y, z)`, with the same checks as [`distance`](Self::distance).
    pub fn phi_term(&self, x: &Point, y: &Point, z: &Point) -> Result<f64> {
        x.ensure_dim(self.dim)?;
        y.ensure_dim(self.dim)?;
        z.ensure_dim(self.dim)?;
        let v = (self.phi)(x, y, z);
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                what: "phi",
                points: vec![x.clone(), y.clone(), z.clone()],
                value: v,
            })
        }
    }

    /// Unchecked evaluators for callers that have already validated dimensions.
    pub(crate) fn dist_fn(&self) -> &DistFn {
        &self.dist
    }

    pub(crate) fn phi_fn(&self) -> &PhiFn {
        &self.phi
    }

    /// Raw `d(x,y)` that only rejects non-finite output; negative values are
    /// passed through so the checker can report them as witnesses.
    pub(crate) fn raw_distance(&self, x: &Point, y: &Point) -> Result<f64> {
        let v = (self.dist)(x, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                what: "distance",
                points: vec![x.clone(), y.clone()],
                value: v,
            })
        }
    }

    pub(crate) fn raw_phi(&self, x: &Point, y: &Point, z: &Point) -> Result<f64> {
        let v = (self.phi)(x, y, z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                what: "phi",
                points: vec![x.clone(), y.clone(), z.clone()],
                value: v,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> PhiMetricSpace {
        PhiMetricSpace::new("abs", 1, |x, y| (x.x() - y.x()).abs(), |_, _, _| 0.0)
    }

    #[test]
    fn distance_checks_dimension() {
        let s = line();
        let err = s
            .distance(&Point::scalar(0.0), &Point::new(vec![0.0, 1.0]).unwrap())
            .unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: 2
            }
        ));
    }

    #[test]
    fn evaluator_failure_carries_points() {
        let s = PhiMetricSpace::new("bad", 1, |_, _| f64::NAN, |_, _, _| -1.0);
        let x = Point::scalar(1.0);
        match s.distance(&x, &x).unwrap_err() {
            Error::Evaluation { what, points, .. } => {
                assert_eq!(what, "distance");
                assert_eq!(points, vec![x.clone(), x.clone()]);
            }
            e => panic!("unexpected {e}"),
        }
        assert!(s.phi_term(&x, &x, &x).is_err());
    }

    #[test]
    fn conditioning_picks_min_or_max() {
        assert_eq!(ContinuityMode::Either.conditioning(1.0, 3.0), 1.0);
        assert_eq!(ContinuityMode::Both.conditioning(1.0, 3.0), 3.0);
    }
}
