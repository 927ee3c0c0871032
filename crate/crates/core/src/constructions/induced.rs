//! φ-metrics induced by S-metrics, b-metrics and strong b-metrics.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Metric;
use crate::axioms::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};
use crate::point::{BoxDomain, Domain, Point};
use crate::sampler::Sampler;
use crate::space::{ContinuityMode, DistFn, PhiMetricSpace, SpaceShape};

pub type SFn = Arc<dyn Fn(&Point, &Point, &Point) -> f64 + Send + Sync>;

/// Pairs drawn when probing an induced distance for symmetry.
const SYMMETRY_PROBE: usize = 256;
const PROBE_SEED: u64 = 0x00C0_FFEE;

/// A sampled violation of a generating inequality (S-metric or b-metric).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecViolation {
    pub rule: String,
    pub points: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
}

fn violation(rule: &str, points: &[&Point], lhs: f64, rhs: f64) -> SpecViolation {
    SpecViolation {
        rule: rule.to_owned(),
        points: points.iter().map(|p| (*p).clone()).collect(),
        lhs,
        rhs,
    }
}

fn probe_box(dim: usize, domain: &Domain) -> BoxDomain {
    match domain {
        Domain::Box(b) => b.clone(),
        Domain::Unbounded => BoxDomain::cube(dim, -1.0, 1.0).expect("valid cube"),
    }
}

/// A three-point S-metric `S(x,y,z)`.
#[derive(Clone)]
pub struct SMetricSpec {
    label: String,
    dim: usize,
    s: SFn,
    domain: Domain,
}

impl fmt::Debug for SMetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SMetricSpec")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish()
    }
}

impl SMetricSpec {
    pub fn new<F>(label: impl Into<String>, dim: usize, s: F) -> Self
    where
        F: Fn(&Point, &Point, &Point) -> f64 + Send + Sync + 'static,
    {
        SMetricSpec {
            label: label.into(),
            dim,
            s: Arc::new(s),
            domain: Domain::Unbounded,
        }
    }

    /// `S(x,y,z) = ‖x − z‖ + ‖y − z‖`, which induces `d(x,y) = 2‖x − y‖`.
    pub fn abs_sum(dim: usize) -> Self {
        let m = Metric::euclidean();
        SMetricSpec::new("s-abs-sum", dim, move |x, y, z| m.eval(x, z) + m.eval(y, z))
    }

    pub fn with_domain(mut self, domain: BoxDomain) -> Self {
        assert_eq!(domain.dim(), self.dim, "domain dimension must match spec");
        self.domain = Domain::Box(domain);
        self
    }

    pub fn eval(&self, x: &Point, y: &Point, z: &Point) -> f64 {
        (self.s)(x, y, z)
    }

    /// Samples `S ≥ 0`, `S(x,x,x) = 0`, `S > 0` on distinct triples and
    /// `S(x,y,z) ≤ S(x,x,w) + S(y,y,w) + S(z,z,w)`.
    pub fn check(&self, sampler: &Sampler, tol: f64) -> Result<Vec<SpecViolation>> {
        let mut stream = sampler.stream(self.dim, &self.domain)?;
        let mut out = Vec::new();
        for _ in 0..sampler.count {
            let [x, y, z, w] = [
                stream.next_point()?,
                stream.next_point()?,
                stream.next_point()?,
                stream.next_point()?,
            ];
            let sxyz = self.eval(&x, &y, &z);
            if sxyz < 0.0 {
                out.push(violation("nonnegative", &[&x, &y, &z], sxyz, 0.0));
            }
            let sxxx = self.eval(&x, &x, &x);
            if sxxx.abs() > tol {
                out.push(violation("zero-on-diagonal", &[&x, &x, &x], sxxx, 0.0));
            }
            if !(x == y && y == z) && sxyz == 0.0 {
                out.push(violation("positive-off-diagonal", &[&x, &y, &z], 0.0, 0.0));
            }
            let rhs = self.eval(&x, &x, &w) + self.eval(&y, &y, &w) + self.eval(&z, &z, &w);
            if sxyz > rhs + tol {
                out.push(violation("tetrahedral", &[&x, &y, &z, &w], sxyz, rhs));
            }
        }
        Ok(out)
    }
}

/// A b-metric `d` with coefficient `K ≥ 1`:
/// `d(x,z) ≤ K[d(x,y) + d(y,z)]`, or the strong form `d(x,z) ≤ K·d(x,y) + d(y,z)`.
#[derive(Clone)]
pub struct BMetricSpec {
    label: String,
    dim: usize,
    k: f64,
    dist: DistFn,
    domain: Domain,
    root_exponent: Option<f64>,
}

impl fmt::Debug for BMetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BMetricSpec")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("k", &self.k)
            .field("domain", &self.domain)
            .finish()
    }
}

impl BMetricSpec {
    pub fn new<F>(label: impl Into<String>, dim: usize, k: f64, dist: F) -> Self
    where
        F: Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    {
        BMetricSpec {
            label: label.into(),
            dim,
            k,
            dist: Arc::new(dist),
            domain: Domain::Unbounded,
            root_exponent: None,
        }
    }

    /// `‖x − y‖^q`, a b-metric with `K = 2^(q−1)` for `q ≥ 1`
    /// (from `(a + b)^q ≤ 2^(q−1)(a^q + b^q)`).
    pub fn power(q: f64, dim: usize) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::input(format!("power exponent must be ≥ 1, got {q}")));
        }
        Ok(BMetricSpec {
            label: format!("euclidean^{q}"),
            dim,
            k: 2f64.powf(q - 1.0),
            dist: Metric::euclidean().powered(q),
            domain: Domain::Unbounded,
            root_exponent: Some(q),
        })
    }

    /// `f(‖x − y‖)` for the ramp `f(t) = t + (K−1)t²/(2L)` on `[0, L]`,
    /// continued linearly with slope `K`.
    ///
    /// `f` is increasing with `t ≤ f(t)` and `f' ≤ K`, so
    /// `f(r₁ + r₂) ≤ f(r₂) + K·r₁ ≤ K·f(r₁) + f(r₂)`: a strong b-metric. For
    /// `K > 1` it is strictly convex near zero and hence not a metric.
    pub fn ramp(k: f64, l: f64, dim: usize) -> Result<Self> {
        if !(k >= 1.0 && k.is_finite()) {
            return Err(Error::input(format!("coefficient K must be ≥ 1, got {k}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::input(format!(
                "ramp length must be positive, got {l}"
            )));
        }
        let m = Metric::euclidean();
        Ok(BMetricSpec::new(
            format!("ramp(K={k}, L={l})"),
            dim,
            k,
            move |x, y| {
                let t = m.eval(x, y);
                if t <= l {
                    t + (k - 1.0) * t * t / (2.0 * l)
                } else {
                    k * t - (k - 1.0) * l / 2.0
                }
            },
        ))
    }

    pub fn with_domain(mut self, domain: BoxDomain) -> Self {
        assert_eq!(domain.dim(), self.dim, "domain dimension must match spec");
        self.domain = Domain::Box(domain);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Records that `d = m^q` for a genuine metric `m`.
    pub fn with_root_exponent(mut self, q: f64) -> Self {
        self.root_exponent = Some(q);
        self
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        (self.dist)(x, y)
    }

    fn sample_triples(
        &self,
        sampler: &Sampler,
        mut check: impl FnMut(&Point, &Point, &Point, &mut Vec<SpecViolation>),
    ) -> Result<Vec<SpecViolation>> {
        let mut stream = sampler.stream(self.dim, &self.domain)?;
        let mut out = Vec::new();
        for _ in 0..sampler.count {
            let [x, y, z] = [
                stream.next_point()?,
                stream.next_point()?,
                stream.next_point()?,
            ];
            for (a, b, c) in [
                (&x, &y, &z),
                (&y, &z, &x),
                (&z, &x, &y),
                (&x, &z, &y),
                (&z, &y, &x),
                (&y, &x, &z),
            ] {
                check(a, b, c, &mut out);
            }
        }
        Ok(out)
    }

    /// Samples `d(x,z) ≤ K[d(x,y) + d(y,z)]` over all orderings of each triple.
    pub fn check_relaxed(&self, sampler: &Sampler, tol: f64) -> Result<Vec<SpecViolation>> {
        self.sample_triples(sampler, |x, y, z, out| {
            let lhs = self.eval(x, z);
            let rhs = self.k * (self.eval(x, y) + self.eval(y, z));
            if lhs > rhs + tol {
                out.push(violation("relaxed-triangle", &[x, y, z], lhs, rhs));
            }
        })
    }

    /// Samples `d(x,z) ≤ K·d(x,y) + d(y,z)` over all orderings of each triple.
    pub fn check_strong(&self, sampler: &Sampler, tol: f64) -> Result<Vec<SpecViolation>> {
        self.sample_triples(sampler, |x, y, z, out| {
            let lhs = self.eval(x, z);
            let rhs = self.k * self.eval(x, y) + self.eval(y, z);
            if lhs > rhs + tol {
                out.push(violation("strong-triangle", &[x, y, z], lhs, rhs));
            }
        })
    }
}

/// Builds `d`, `φ = c·[d(x,z) + d(y,z)]` and the modulus `ε ↦ ε/(2·m)`.
///
/// At `z = x` the sum still contains `d(y,x)`, so `φ` is set to zero there
/// (and at `z = y`) explicitly; the triangle inequality is trivial in those
/// cases, and `φ` only gets smaller, so the modulus is unaffected.
fn sum_phi_space(label: String, dim: usize, dist: DistFn, c: f64, m: f64) -> PhiMetricSpace {
    let d = dist.clone();
    PhiMetricSpace::from_parts(
        label,
        dim,
        dist,
        Arc::new(move |x, y, z| {
            if z == x || z == y {
                0.0
            } else {
                c * (d(x, z) + d(y, z))
            }
        }),
    )
    .with_modulus(move |eps| eps / (2.0 * m))
    .with_continuity(ContinuityMode::Both)
}

/// `d(x,y) = S(x,x,y)` with `φ(x,y,z) = d(x,z) + d(y,z)` and `δ(ε) = ε/2`.
///
/// The induced distance is probed for symmetry on a fixed sample of the
/// spec's domain (or `[−1, 1]ⁿ` when unbounded); an asymmetric `S` is rejected.
pub fn from_s_metric(spec: &SMetricSpec) -> Result<PhiMetricSpace> {
    let s = spec.s.clone();
    let dist: DistFn = Arc::new(move |x, y| s(x, x, y));
    let probe = Sampler::uniform_in(
        PROBE_SEED,
        SYMMETRY_PROBE,
        probe_box(spec.dim, &spec.domain),
    );
    let mut stream = probe.stream(spec.dim, &spec.domain)?;
    for _ in 0..SYMMETRY_PROBE {
        let (x, y) = (stream.next_point()?, stream.next_point()?);
        let (xy, yx) = (dist(&x, &y), dist(&y, &x));
        if (xy - yx).abs() > DEFAULT_TOLERANCE {
            return Err(Error::input(format!(
                "S-metric '{}' induces an asymmetric distance: d({x}, {y}) = {xy} but d({y}, {x}) = {yx}",
                spec.label
            )));
        }
    }
    Ok(sum_phi_space(
        format!("s-induced({})", spec.label),
        spec.dim,
        dist,
        1.0,
        1.0,
    )
    .with_domain_value(spec.domain.clone())
    .with_shape(SpaceShape {
        root_exponent: None,
        local_phi_slope: Some(2.0),
    }))
}

fn b_space(spec: &BMetricSpec, kind: &str) -> Result<PhiMetricSpace> {
    let k = spec.k;
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::input(format!("coefficient K must be ≥ 1, got {k}")));
    }
    Ok(sum_phi_space(
        format!("{kind}({}, K={k})", spec.label),
        spec.dim,
        spec.dist.clone(),
        k - 1.0,
        k,
    )
    .with_domain_value(spec.domain.clone())
    .with_shape(SpaceShape {
        root_exponent: spec.root_exponent,
        local_phi_slope: Some(2.0 * (k - 1.0)),
    }))
}

/// `d = B` with `φ(x,y,z) = (K−1)[d(x,z) + d(y,z)]` and `δ(ε) = ε/(2K)`.
pub fn from_b_metric(spec: &BMetricSpec) -> Result<PhiMetricSpace> {
    b_space(spec, "b-induced")
}

/// Same assembly as [`from_b_metric`], for a strong b-metric.
pub fn from_strong_b_metric(spec: &BMetricSpec) -> Result<PhiMetricSpace> {
    b_space(spec, "strong-b-induced")
}

fn lp_sum(p: f64) -> impl Fn(&Point, &Point) -> f64 + Send + Sync + Clone + 'static {
    move |x: &Point, y: &Point| {
        x.coords()
            .iter()
            .zip(y.coords())
            .map(|(a, b)| (a - b).abs().powf(p))
            .sum()
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::input(format!("p must lie in (0, 1), got {p}")))
    }
}

/// `d(x,y) = ‖x − y‖_p² = (Σ|xᵢ − yᵢ|^p)^(2/p)` for `0 < p < 1`.
///
/// `m = Σ|xᵢ − yᵢ|^p` is a metric and `d = m^(2/p)`, so `d` is a b-metric
/// with `K = 2^(2/p − 1)` and is routed through [`from_b_metric`].
pub fn lp_quasinorm_space(p: f64, dim: usize) -> Result<PhiMetricSpace> {
    check_p(p)?;
    let m = lp_sum(p);
    let r = 2.0 / p;
    let spec = BMetricSpec::new(
        format!("lp-quasinorm^2(p={p})"),
        dim,
        2f64.powf(r - 1.0),
        move |x, y| m(x, y).powf(r),
    )
    .with_root_exponent(r);
    from_b_metric(&spec)
}

/// The squared-metric reading on ℓ_p: `d(x,y) = (Σ|xᵢ − yᵢ|^p)²`, built as
/// the square of the metric `Σ|xᵢ − yᵢ|^p` on the given box.
pub fn lp_metric_squared_space(p: f64, domain: BoxDomain) -> Result<PhiMetricSpace> {
    check_p(p)?;
    let diameter: f64 = domain
        .lo()
        .iter()
        .zip(domain.hi())
        .map(|(a, b)| (b - a).powf(p))
        .sum();
    let dim = domain.dim();
    let metric = Metric::custom(format!("lp-metric(p={p})"), lp_sum(p));
    super::from_metric_squared(&metric, dim, Domain::Box(domain), Some(diameter))
}
