use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{BoxDomain, Domain, Point};
use crate::sampler::Sampler;

/// The contraction condition a map is checked or solved against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionKind {
    /// `d(Tx,Ty) ≤ k·d(x,y)` with `k < 1`.
    Banach,
    /// `d(Tx,Ty) ≤ k·[d(x,Tx) + d(y,Ty)]` with `k < 1/2`.
    Kannan,
    /// `d(Tx,Ty) < d(x,y)` for `x ≠ y`.
    Edelstein,
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractionKind::Banach => "banach",
            ContractionKind::Kannan => "kannan",
            ContractionKind::Edelstein => "edelstein",
        })
    }
}

pub type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A map `T` of a box into itself.
#[derive(Clone)]
pub struct SelfMap {
    label: String,
    domain: BoxDomain,
    intended: Option<ContractionKind>,
    map: MapFn,
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelfMap")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("intended", &self.intended)
            .finish()
    }
}

impl SelfMap {
    pub fn new<F>(label: impl Into<String>, domain: BoxDomain, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        SelfMap {
            label: label.into(),
            domain,
            intended: None,
            map: Arc::new(f),
        }
    }

    pub fn with_intended(mut self, kind: ContractionKind) -> Self {
        self.intended = Some(kind);
        self
    }

    /// `sin(x)/2`, a Banach contraction with `k = 1/4` under the squared
    /// distance, on `[−10, 10]`.
    pub fn half_sine() -> Self {
        SelfMap::new("half-sine", interval(-10.0, 10.0), |x| {
            vec![x[0].sin() / 2.0]
        })
        .with_intended(ContractionKind::Banach)
    }

    /// `x/10` below 1 and `x/5` on `[1, 2]`, a Kannan map with `k = 1/8`
    /// under the squared distance, on `[−2, 2]`.
    pub fn kannan_piecewise() -> Self {
        SelfMap::new("kannan-piecewise", interval(-2.0, 2.0), |x| {
            let x = x[0];
            vec![if x < 1.0 { x / 10.0 } else { x / 5.0 }]
        })
        .with_intended(ContractionKind::Kannan)
    }

    /// `arctan(x) − x` on `[−π/2, π/2]`: strictly contractive, with no
    /// uniform factor.
    pub fn arctan_shift() -> Self {
        SelfMap::new("arctan-shift", interval(-FRAC_PI_2, FRAC_PI_2), |x| {
            vec![x[0].atan() - x[0]]
        })
        .with_intended(ContractionKind::Edelstein)
    }

    /// `x ↦ a·x + b` coordinatewise on `domain`; intended Banach when
    /// `|a| < 1`.
    pub fn affine(a: f64, b: f64, domain: BoxDomain) -> Self {
        let m = SelfMap::new(format!("affine({a}, {b})"), domain, move |x| {
            x.iter().map(|v| a * v + b).collect()
        });
        if a.abs() < 1.0 {
            m.with_intended(ContractionKind::Banach)
        } else {
            m
        }
    }

    /// Looks up a built-in map by id.
    pub fn builtin(id: &str) -> Option<Self> {
        match id {
            "half-sine" => Some(SelfMap::half_sine()),
            "kannan-piecewise" => Some(SelfMap::kannan_piecewise()),
            "arctan-shift" => Some(SelfMap::arctan_shift()),
            _ => None,
        }
    }

    pub const BUILTIN_IDS: [&'static str; 3] = ["half-sine", "kannan-piecewise", "arctan-shift"];

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn intended(&self) -> Option<ContractionKind> {
        self.intended
    }

    /// `T x`; errors on dimension mismatch or non-finite output. Leaving the
    /// domain is not an error here, see [`SelfMap::apply_inside`].
    pub fn apply(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim())?;
        let out = (self.map)(x.coords());
        if out.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: out.len(),
            });
        }
        Point::new(out)
    }

    /// `T x`, failing with [`Error::Precondition`] when it leaves the box.
    pub fn apply_inside(&self, x: &Point) -> Result<Point> {
        let y = self.apply(x)?;
        if !self.domain.contains(&y) {
            return Err(Error::Precondition(format!(
                "{} maps {x} to {y}, outside its domain",
                self.label
            )));
        }
        Ok(y)
    }

    /// Sampled points whose image leaves the domain.
    pub fn self_map_check(&self, sampler: &Sampler) -> Result<Vec<Point>> {
        let mut stream = sampler.stream(self.dim(), &Domain::Box(self.domain.clone()))?;
        let mut escapes = Vec::new();
        for _ in 0..sampler.count {
            let x = stream.next_point()?;
            if !self.domain.contains(&self.apply(&x)?) {
                escapes.push(x);
            }
        }
        Ok(escapes)
    }
}

fn interval(lo: f64, hi: f64) -> BoxDomain {
    BoxDomain::new(vec![lo], vec![hi]).expect("valid interval")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_self_maps() {
        for id in SelfMap::BUILTIN_IDS {
            let t = SelfMap::builtin(id).unwrap();
            assert!(t.intended().is_some());
            assert!(
                t.self_map_check(&Sampler::uniform(3, 2000))
                    .unwrap()
                    .is_empty(),
                "{id}"
            );
        }
        assert!(SelfMap::builtin("nope").is_none());
    }

    #[test]
    fn piecewise_values() {
        let t = SelfMap::kannan_piecewise();
        assert_eq!(t.apply(&Point::scalar(1.5)).unwrap().x(), 0.3);
        assert_eq!(t.apply(&Point::scalar(0.5)).unwrap().x(), 0.05);
    }

    #[test]
    fn translation_escapes() {
        let t = SelfMap::affine(1.0, 1.0, interval(-10.0, 10.0));
        assert!(t.intended().is_none());
        assert!(t.apply_inside(&Point::scalar(9.5)).is_err());
        assert!(!t
            .self_map_check(&Sampler::uniform(1, 500))
            .unwrap()
            .is_empty());
    }
}
