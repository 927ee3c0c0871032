use std::fmt;
use std::sync::Arc;

use crate::point::{BoxDomain, Point};
use crate::space::DistFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Euclidean,
    Manhattan,
    Custom,
}

/// A genuine metric on ℝⁿ, used as raw material by the constructors.
///
/// The metric axioms are the caller's responsibility for custom metrics;
/// `from_metric` followed by `check_axioms` tests them.
#[derive(Clone)]
pub struct Metric {
    label: String,
    kind: Kind,
    f: DistFn,
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric")
            .field("label", &self.label)
            .finish()
    }
}

fn euclidean_sq(x: &Point, y: &Point) -> f64 {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

impl Metric {
    pub fn euclidean() -> Self {
        Metric {
            label: "euclidean".into(),
            kind: Kind::Euclidean,
            f: Arc::new(|x, y| euclidean_sq(x, y).sqrt()),
        }
    }

    pub fn manhattan() -> Self {
        Metric {
            label: "manhattan".into(),
            kind: Kind::Manhattan,
            f: Arc::new(|x, y| {
                x.coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(a, b)| (a - b).abs())
                    .sum()
            }),
        }
    }

    pub fn custom<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    {
        Metric {
            label: label.into(),
            kind: Kind::Custom,
            f: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        (self.f)(x, y)
    }

    /// `m(x,y)^q`. The Euclidean square is summed directly so that every
    /// route to "squared Euclidean" produces bit-identical values.
    pub fn powered(&self, q: f64) -> DistFn {
        if self.kind == Kind::Euclidean && q == 2.0 {
            return Arc::new(euclidean_sq);
        }
        if q == 1.0 {
            return self.f.clone();
        }
        let f = self.f.clone();
        Arc::new(move |x, y| f(x, y).powf(q))
    }

    /// Largest distance between two points of `b`, when it is known in
    /// closed form. Norm metrics attain it at opposite corners.
    pub fn box_diameter(&self, b: &BoxDomain) -> Option<f64> {
        match self.kind {
            Kind::Euclidean | Kind::Manhattan => Some(self.eval(&b.lo_corner(), &b.hi_corner())),
            Kind::Custom => None,
        }
    }
}
