use std::sync::Arc;

use super::Metric;
use crate::error::{Error, Result};
use crate::point::{BoxDomain, Domain};
use crate::space::{ContinuityMode, PhiMetricSpace, SpaceShape};

/// A metric viewed as a φ-metric with `φ ≡ 0`.
pub fn from_metric(metric: &Metric, dim: usize) -> PhiMetricSpace {
    PhiMetricSpace::from_parts(
        metric.label().to_owned(),
        dim,
        metric.powered(1.0),
        Arc::new(|_, _, _| 0.0),
    )
    .with_modulus(|_| 1.0)
    .with_continuity(ContinuityMode::Either)
    .with_shape(SpaceShape {
        root_exponent: Some(1.0),
        local_phi_slope: Some(0.0),
    })
}

/// `d = m²` with `φ(x,y,z) = 2·√(d(x,z)·d(z,y))`.
///
/// The modulus `δ(ε) = min(ε²/(4·D), 1)` needs an upper bound `D` on `d`
/// over the domain: given by `diameter_hint` (in units of `m`), or read off
/// the domain box for norm metrics.
pub fn from_metric_squared(
    metric: &Metric,
    dim: usize,
    domain: Domain,
    diameter_hint: Option<f64>,
) -> Result<PhiMetricSpace> {
    if let Domain::Box(b) = &domain {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
    }
    let m_diam = match (diameter_hint, &domain) {
        (Some(h), _) => h,
        (None, Domain::Box(b)) => metric.box_diameter(b).ok_or_else(|| {
            Error::config(format!(
                "no diameter bound for metric '{}'; pass a diameter hint",
                metric.label()
            ))
        })?,
        (None, Domain::Unbounded) => {
            return Err(Error::config(
                "squared metric on an unbounded domain needs a diameter hint",
            ))
        }
    };
    if !(m_diam >= 0.0 && m_diam.is_finite()) {
        return Err(Error::config(format!("invalid diameter bound {m_diam}")));
    }
    let d_max = m_diam * m_diam;
    let dist = metric.powered(2.0);
    let d = dist.clone();
    let phi = Arc::new(move |x: &_, y: &_, z: &_| 2.0 * (d(x, z) * d(z, y)).sqrt());
    Ok(
        PhiMetricSpace::from_parts(format!("squared-{}", metric.label()), dim, dist, phi)
            .with_domain_value(domain)
            .with_modulus(move |eps| {
                if d_max == 0.0 {
                    1.0
                } else {
                    (eps * eps / (4.0 * d_max)).min(1.0)
                }
            })
            .with_continuity(ContinuityMode::Either)
            .with_shape(SpaceShape {
                root_exponent: Some(2.0),
                local_phi_slope: Some(2.0),
            }),
    )
}

/// Squared Euclidean distance on a box.
pub fn squared_euclidean(domain: BoxDomain) -> PhiMetricSpace {
    let dim = domain.dim();
    from_metric_squared(&Metric::euclidean(), dim, Domain::Box(domain), None)
        .expect("euclidean diameter is always available on a box")
        .with_label("squared-euclidean")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point;

    fn line() -> PhiMetricSpace {
        squared_euclidean(BoxDomain::cube(1, -10.0, 10.0).unwrap())
    }

    #[test]
    fn collinear_triangle_is_tight() {
        let s = line();
        let (x, y, z) = (Point::scalar(0.0), Point::scalar(2.0), Point::scalar(1.0));
        assert_eq!(s.distance(&x, &y).unwrap(), 4.0);
        let rhs = s.distance(&x, &z).unwrap()
            + s.distance(&z, &y).unwrap()
            + s.phi_term(&x, &y, &z).unwrap();
        assert_eq!(rhs, 4.0);
        assert_eq!(
            s.phi_term(
                &Point::scalar(1.0),
                &Point::scalar(3.0),
                &Point::scalar(2.0)
            )
            .unwrap(),
            2.0
        );
    }

    #[test]
    fn modulus_uses_box_diameter() {
        // D = 20² = 400
        let s = line();
        assert_eq!(s.modulus(0.01), Some(1e-4 / 1600.0));
        assert_eq!(s.modulus(1e6), Some(1.0));
    }

    #[test]
    fn unbounded_needs_hint() {
        let e = from_metric_squared(&Metric::euclidean(), 1, Domain::Unbounded, None).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
        let s = from_metric_squared(&Metric::euclidean(), 1, Domain::Unbounded, Some(2.0)).unwrap();
        assert_eq!(s.modulus(4.0), Some(1.0));
        let custom = Metric::custom("c", |x, y| (x.x() - y.x()).abs());
        let b = Domain::Box(BoxDomain::cube(1, 0.0, 1.0).unwrap());
        assert!(from_metric_squared(&custom, 1, b, None).is_err());
    }
}
