use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ContractionCertificate, ContractionKind, SelfMap};
use crate::error::{Error, Result};
use crate::point::{Domain, Point};
use crate::sampler::Sampler;
use crate::sequences::Trace;
use crate::space::PhiMetricSpace;

pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// A converged Picard iteration.
#[derive(Clone, Debug)]
pub struct FixedPointResult {
    pub kind: ContractionKind,
    pub point: Point,
    /// Map applications needed to reach `point` from `x0`.
    pub iterations: usize,
    /// `d(T x*, x*)`.
    pub residual: f64,
    pub certified_k: Option<f64>,
    /// `k/(1−k)` for Kannan runs with a certificate.
    pub alpha: Option<f64>,
    /// `x_0, …, x*`, indexed from 0.
    pub trace: Trace,
}

/// Serializable summary of a [`FixedPointResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub kind: ContractionKind,
    pub point: Point,
    pub iterations: usize,
    pub residual: f64,
    pub certified_k: Option<f64>,
    pub alpha: Option<f64>,
    pub max_step_ratio: Option<f64>,
    pub trace_ref: Option<String>,
}

impl FixedPointResult {
    pub fn with_certificate(mut self, cert: &ContractionCertificate) -> Self {
        self.certified_k = Some(cert.k_estimate);
        self.alpha = cert.kannan_alpha();
        self
    }

    /// Largest `d(x_{n+1}, x_{n+2}) / d(x_n, x_{n+1})` over positive steps.
    pub fn max_step_ratio(&self) -> Option<f64> {
        max_step_ratio(self.trace.step_dists())
    }

    pub fn report(&self, trace_ref: Option<String>) -> FixedPointReport {
        FixedPointReport {
            kind: self.kind,
            point: self.point.clone(),
            iterations: self.iterations,
            residual: self.residual,
            certified_k: self.certified_k,
            alpha: self.alpha,
            max_step_ratio: self.max_step_ratio(),
            trace_ref,
        }
    }
}

fn max_step_ratio(steps: &[f64]) -> Option<f64> {
    steps
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .reduce(f64::max)
}

/// Why an iteration stopped without a fixed point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum FailureReason {
    MaxIterations,
    /// `T x_n` left the map's domain; the iteration is not clamped.
    DomainEscape {
        from: Point,
        image: Point,
    },
    /// A step did not shrink, so the map is not strictly contractive there.
    NotContractive {
        position: usize,
        step: f64,
        next_step: f64,
    },
    /// Steps were still shrinking when the horizon ran out: no convergent
    /// subsequence detected at this horizon.
    HorizonExhausted,
    /// Steps show no decrease over the horizon.
    NoDecreaseTrend,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::MaxIterations => write!(f, "iteration limit reached"),
            FailureReason::DomainEscape { from, image } => {
                write!(f, "T maps {from} to {image}, outside the domain")
            }
            FailureReason::NotContractive {
                position,
                step,
                next_step,
            } => write!(
                f,
                "step {next_step:e} after x_{} is not below the previous step {step:e}; the map is not strictly contractive",
                position + 1
            ),
            FailureReason::HorizonExhausted => {
                write!(f, "no convergent subsequence detected at this horizon")
            }
            FailureReason::NoDecreaseTrend => {
                write!(f, "inconclusive: steps show no decrease over the horizon")
            }
        }
    }
}

/// A stopped iteration with everything recorded up to the stop.
#[derive(Clone, Debug)]
pub struct SolveFailure {
    pub kind: ContractionKind,
    pub reason: FailureReason,
    pub iterations: usize,
    pub trace: Trace,
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} iteration stopped after {} iterations: {}",
            self.kind, self.iterations, self.reason
        )
    }
}

fn check_args(
    space: &PhiMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::input("max_iter must be at least 1"));
    }
    if space.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: map.dim(),
        });
    }
    x0.ensure_dim(map.dim())?;
    if !map.domain().contains(x0) {
        return Err(Error::input(format!(
            "x0 = {x0} lies outside the map's domain"
        )));
    }
    Ok(())
}

/// Picard iteration `x_{n+1} = T x_n`. Stops at `x* = x_{n+1}` once
/// `d(x_n, x_{n+1}) < tol` and `d(T x*, x*) < tol`.
fn picard(
    kind: ContractionKind,
    space: &PhiMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    check_args(space, map, x0, tol, max_iter)?;
    let mut trace = Trace::empty(space).with_start_index(0);
    trace.push(x0.clone())?;
    let fail = |reason, trace: Trace| {
        let iterations = trace.len() - 1;
        Err(Error::Solve(Box::new(SolveFailure {
            kind,
            reason,
            iterations,
            trace,
        })))
    };
    let step_of = |x: &Point| -> Result<std::result::Result<(Point, f64), FailureReason>> {
        let y = map.apply(x)?;
        if !map.domain().contains(&y) {
            return Ok(Err(FailureReason::DomainEscape {
                from: x.clone(),
                image: y,
            }));
        }
        let d = space.distance(x, &y)?;
        Ok(Ok((y, d)))
    };

    let (mut next, mut step) = match step_of(x0)? {
        Ok(v) => v,
        Err(r) => return fail(r, trace),
    };
    for n in 1..=max_iter {
        // `next` is x_n, `step` is d(x_{n-1}, x_n)
        trace.push(next.clone())?;
        let (after, residual) = match step_of(&next)? {
            Ok(v) => v,
            Err(r) => return fail(r, trace),
        };
        if step < tol && residual < tol {
            return Ok(FixedPointResult {
                kind,
                point: next,
                iterations: n,
                residual,
                certified_k: None,
                alpha: None,
                trace,
            });
        }
        if kind == ContractionKind::Edelstein && step >= tol && residual >= step {
            return fail(
                FailureReason::NotContractive {
                    position: n - 1,
                    step,
                    next_step: residual,
                },
                trace,
            );
        }
        next = after;
        step = residual;
    }
    let reason = match kind {
        ContractionKind::Edelstein => {
            let steps = trace.step_dists();
            let mid = steps[steps.len() / 2];
            if step < mid {
                FailureReason::HorizonExhausted
            } else {
                FailureReason::NoDecreaseTrend
            }
        }
        _ => FailureReason::MaxIterations,
    };
    fail(reason, trace)
}

/// Picard iteration for a Banach contraction.
pub fn banach_solve(
    space: &PhiMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    picard(ContractionKind::Banach, space, map, x0, tol, max_iter)
}

/// Picard iteration for a Kannan map. Attach a certificate with
/// [`FixedPointResult::with_certificate`] to report `α = k/(1−k)`.
pub fn kannan_solve(
    space: &PhiMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    picard(ContractionKind::Kannan, space, map, x0, tol, max_iter)
}

/// Picard iteration for a strictly contractive map. Refuses as soon as a
/// step above `tol` fails to shrink.
pub fn edelstein_solve(
    space: &PhiMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    picard(ContractionKind::Edelstein, space, map, x0, tol, max_iter)
}

pub fn solve(
    kind: ContractionKind,
    space: &PhiMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    picard(kind, space, map, x0, tol, max_iter)
}

/// `steps` Picard iterations from `x0` without a stopping rule. A domain
/// escape ends the run with [`Error::Solve`].
pub fn iterate(space: &PhiMetricSpace, map: &SelfMap, x0: &Point, steps: usize) -> Result<Trace> {
    check_args(space, map, x0, 1.0, steps.max(1))?;
    let mut trace = Trace::empty(space).with_start_index(0);
    trace.push(x0.clone())?;
    let mut x = x0.clone();
    for _ in 0..steps {
        let y = map.apply(&x)?;
        if !map.domain().contains(&y) {
            let iterations = trace.len() - 1;
            return Err(Error::Solve(Box::new(SolveFailure {
                kind: map.intended().unwrap_or(ContractionKind::Banach),
                reason: FailureReason::DomainEscape { from: x, image: y },
                iterations,
                trace,
            })));
        }
        trace.push(y.clone())?;
        x = y;
    }
    Ok(trace)
}

/// Fixed points reached from several starts.
#[derive(Clone, Debug)]
pub struct MultiStartReport {
    pub results: Vec<FixedPointResult>,
    /// Largest `d(x*_i, x*_j)` over all pairs of runs.
    pub max_pairwise: f64,
}

/// Runs [`solve`] from every start in parallel; the first failure in start
/// order is returned.
pub fn multi_start(
    kind: ContractionKind,
    space: &PhiMetricSpace,
    map: &SelfMap,
    starts: &[Point],
    tol: f64,
    max_iter: usize,
) -> Result<MultiStartReport> {
    if starts.is_empty() {
        return Err(Error::input("no starting points"));
    }
    let results = starts
        .par_iter()
        .map(|x0| solve(kind, space, map, x0, tol, max_iter))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut max_pairwise: f64 = 0.0;
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            max_pairwise = max_pairwise.max(space.distance(&a.point, &b.point)?);
        }
    }
    Ok(MultiStartReport {
        results,
        max_pairwise,
    })
}

/// `sampler.count` starting points drawn from the map's domain.
pub fn random_starts(map: &SelfMap, sampler: &Sampler) -> Result<Vec<Point>> {
    sampler
        .stream(map.dim(), &Domain::Box(map.domain().clone()))?
        .points(sampler.count)
}
