use serde::{Deserialize, Serialize};

use super::*;
use crate::error::{Error, Result};
use crate::point::BoxDomain;
use crate::space::PhiMetricSpace;

/// A declarative description of a space, built on a given box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case", deny_unknown_fields)]
/// Variants without parameters are written as `Name {}` so that stray keys
/// are rejected like everywhere else.
pub enum Recipe {
    SquaredEuclidean {},
    Euclidean {},
    /// Induced by `S(x,y,z) = ‖x − z‖ + ‖y − z‖`.
    SInduced {},
    /// Induced by `‖x − y‖^q` with `q = 1 + log₂ K`.
    BInduced {
        k: f64,
    },
    /// Induced by the ramp strong b-metric.
    StrongBInduced {
        k: f64,
        #[serde(default = "default_ramp")]
        l: f64,
    },
    LpQuasinorm {
        p: f64,
    },
    LpMetricSquared {
        p: f64,
    },
    Discrete {},
    Square {
        of: Box<Recipe>,
    },
    Product {
        factors: Vec<Recipe>,
    },
    BrokenPhiZero {},
    PhiJump {},
}

fn default_ramp() -> f64 {
    1.0
}

impl Recipe {
    pub fn build(&self, domain: &BoxDomain) -> Result<PhiMetricSpace> {
        let dim = domain.dim();
        let b = domain.clone();
        Ok(match self {
            Recipe::SquaredEuclidean {} => squared_euclidean(b),
            Recipe::Euclidean {} => from_metric(&Metric::euclidean(), dim).with_domain(b),
            Recipe::SInduced {} => from_s_metric(&SMetricSpec::abs_sum(dim).with_domain(b))?,
            Recipe::BInduced { k } => {
                if !(*k >= 1.0 && k.is_finite()) {
                    return Err(Error::input(format!("coefficient K must be ≥ 1, got {k}")));
                }
                from_b_metric(&BMetricSpec::power(1.0 + k.log2(), dim)?.with_domain(b))?
            }
            Recipe::StrongBInduced { k, l } => {
                from_strong_b_metric(&BMetricSpec::ramp(*k, *l, dim)?.with_domain(b))?
            }
            Recipe::LpQuasinorm { p } => lp_quasinorm_space(*p, dim)?.with_domain(b),
            Recipe::LpMetricSquared { p } => lp_metric_squared_space(*p, b)?,
            Recipe::Discrete {} => discrete_space(dim).with_domain(b),
            Recipe::Square { of } => square(&of.build(domain)?),
            Recipe::Product { factors } => {
                let spaces = factors
                    .iter()
                    .map(|f| f.build(domain))
                    .collect::<Result<Vec<_>>>()?;
                product(&spaces)?
            }
            Recipe::BrokenPhiZero {} => controls::broken_phi_zero(b),
            Recipe::PhiJump {} => {
                if dim != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        found: dim,
                    });
                }
                controls::phi_jump(domain.lo()[0], domain.hi()[0])
            }
        })
    }
}
