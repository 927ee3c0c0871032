use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Trace;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::PhiMetricSpace;

/// Outcome of a tail test on a finite trace.
///
/// `first_index` is the smallest sequence index `N` from which the condition
/// holds on every recorded element. A finite trace always satisfies such a
/// condition on its last element, so the tail only counts as evidence when
/// it spans at least half of the trace (and at least two elements); that is
/// what `consistent` reports. The word is deliberate: a finite trace can be
/// consistent with convergence, never prove it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailResult {
    pub consistent: bool,
    pub first_index: Option<usize>,
    pub tail_len: usize,
}

fn min_tail(len: usize) -> usize {
    len.div_ceil(2).max(2)
}

/// Tail result for a per-position "bad" predicate: `N` is one past the
/// last bad position.
fn tail_from(trace: &Trace, last_bad: Option<usize>) -> TailResult {
    let len = trace.len();
    let start = last_bad.map_or(0, |b| b + 1);
    let tail_len = len - start;
    TailResult {
        consistent: tail_len >= min_tail(len),
        first_index: (tail_len > 0).then(|| trace.index_of(start)),
        tail_len,
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn check_len(trace: &Trace) -> Result<()> {
    if trace.len() < 2 {
        Err(Error::input("trace needs at least two points"))
    } else {
        Ok(())
    }
}

/// `d(x_n, limit) < tol` for every recorded `n ≥ N`.
pub fn converges_to(trace: &Trace, limit: &Point, tol: f64) -> Result<TailResult> {
    check_tol(tol)?;
    check_len(trace)?;
    let space = trace.space();
    let mut last_bad = None;
    for (pos, p) in trace.points().iter().enumerate() {
        if space.distance(p, limit)? >= tol {
            last_bad = Some(pos);
        }
    }
    Ok(tail_from(trace, last_bad))
}

/// `d(x_n, x_m) < tol` for all recorded `m, n ≥ N`, checked exhaustively.
pub fn is_cauchy(trace: &Trace, tol: f64) -> Result<TailResult> {
    check_tol(tol)?;
    check_len(trace)?;
    let pts = trace.points();
    let space = trace.space();
    // reach[n] = max over m > n of d(x_n, x_m), in both argument orders
    let reach: Vec<Result<f64>> = (0..pts.len())
        .into_par_iter()
        .map(|n| {
            let mut r: f64 = 0.0;
            for m in (n + 1)..pts.len() {
                r = r
                    .max(space.distance(&pts[n], &pts[m])?)
                    .max(space.distance(&pts[m], &pts[n])?);
            }
            Ok(r)
        })
        .collect();
    let mut last_bad = None;
    for (n, r) in reach.into_iter().enumerate() {
        if r? >= tol {
            last_bad = Some(n);
        }
    }
    Ok(tail_from(trace, last_bad))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// Always `true` for a finite trace; kept for the report.
    pub bounded: bool,
    /// Largest pairwise distance `K`.
    pub bound: f64,
}

/// Largest pairwise distance over the trace.
pub fn is_bounded(trace: &Trace) -> Result<BoundResult> {
    let pts = trace.points();
    let space = trace.space();
    let rows: Vec<Result<f64>> = (0..pts.len())
        .into_par_iter()
        .map(|n| {
            let mut r: f64 = 0.0;
            for m in 0..pts.len() {
                r = r.max(space.distance(&pts[n], &pts[m])?);
            }
            Ok(r)
        })
        .collect();
    let mut bound: f64 = 0.0;
    for r in rows {
        bound = bound.max(r?);
    }
    Ok(BoundResult {
        bounded: bound.is_finite(),
        bound,
    })
}

/// With `x_n → x` and `y_n → y` (both checked at `tol`), tests that
/// `|d(x_n, y_n) − d(x, y)| < tol` on a tail.
pub fn distance_limit_check(
    trace_x: &Trace,
    trace_y: &Trace,
    x: &Point,
    y: &Point,
    tol: f64,
) -> Result<TailResult> {
    if trace_x.len() != trace_y.len() {
        return Err(Error::Precondition(format!(
            "traces have different lengths {} and {}",
            trace_x.len(),
            trace_y.len()
        )));
    }
    for (name, t, l) in [("first", trace_x, x), ("second", trace_y, y)] {
        if !converges_to(t, l, tol)?.consistent {
            return Err(Error::Precondition(format!(
                "{name} trace is not consistent with convergence to {l} at tol {tol:e}"
            )));
        }
    }
    let space = trace_x.space();
    let target = space.distance(x, y)?;
    let mut last_bad = None;
    for (pos, (a, b)) in trace_x.points().iter().zip(trace_y.points()).enumerate() {
        if (space.distance(a, b)? - target).abs() >= tol {
            last_bad = Some(pos);
        }
    }
    Ok(tail_from(trace_x, last_bad))
}

/// Constant `c` with `d(p, q) < c·tol` whenever one trace element is within
/// `tol` of both `p` and `q`.
///
/// From `d(p,q) ≤ d(p,z) + d(z,q) + φ(p,q,z)` and `φ ≤ L·t` once `z` is
/// within `t` of both `p` and `q` (the space's local slope `L`):
/// `c = 2 + L`. `None` when the space does not declare `L`.
pub fn limit_uniqueness_constant(space: &PhiMetricSpace) -> Option<f64> {
    space.shape().local_phi_slope.map(|l| 2.0 + l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::squared_euclidean;
    use crate::point::BoxDomain;

    fn sq() -> PhiMetricSpace {
        squared_euclidean(BoxDomain::cube(1, -1000.0, 1000.0).unwrap())
    }

    fn inverse(n: usize) -> Trace {
        Trace::from_scalars(&sq(), (1..=n).map(|k| 1.0 / k as f64)).unwrap()
    }

    #[test]
    fn inverse_sequence_tail() {
        let r = converges_to(&inverse(1000), &Point::scalar(0.0), 1e-4).unwrap();
        assert!(r.consistent);
        assert_eq!(r.first_index, Some(101));
    }

    #[test]
    fn constant_and_alternating() {
        let c = Trace::from_scalars(&sq(), [2.0; 10]).unwrap();
        assert_eq!(
            converges_to(&c, &Point::scalar(2.0), 1e-9)
                .unwrap()
                .first_index,
            Some(1)
        );
        assert_eq!(is_cauchy(&c, 1e-9).unwrap().first_index, Some(1));
        assert_eq!(is_bounded(&c).unwrap().bound, 0.0);
        let alt = Trace::from_scalars(&sq(), (0..20).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }))
            .unwrap();
        assert!(
            !converges_to(&alt, &Point::scalar(0.0), 0.5)
                .unwrap()
                .consistent
        );
    }

    #[test]
    fn harmonic_partial_sums_not_cauchy() {
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=200)
            .map(|k| {
                s += 1.0 / k as f64;
                s
            })
            .collect();
        let t = Trace::from_scalars(&sq(), sums).unwrap();
        assert!(!is_cauchy(&t, 0.01).unwrap().consistent);
        assert!(is_cauchy(&inverse(1000), 1e-4).unwrap().consistent);
    }

    #[test]
    fn bounds() {
        let b = is_bounded(&inverse(100)).unwrap();
        assert!((b.bound - (1.0 - 0.01f64).powi(2)).abs() < 1e-15);
        let t = Trace::from_scalars(&sq(), [0.0, 2.0]).unwrap();
        assert_eq!(is_bounded(&t).unwrap().bound, 4.0);
    }

    #[test]
    fn short_trace_and_bad_tol() {
        let t = Trace::from_scalars(&sq(), [1.0]).unwrap();
        assert!(converges_to(&t, &Point::scalar(1.0), 1e-3).is_err());
        assert!(is_cauchy(&inverse(10), 0.0).is_err());
    }

    #[test]
    fn distance_of_limits() {
        let n = 1000;
        let xs = Trace::from_scalars(&sq(), (1..=n).map(|k| 1.0 / k as f64)).unwrap();
        let ys = Trace::from_scalars(&sq(), (1..=n).map(|k| 2.0 + 1.0 / k as f64)).unwrap();
        let r =
            distance_limit_check(&xs, &ys, &Point::scalar(0.0), &Point::scalar(2.0), 1e-4).unwrap();
        assert!(r.consistent);
        let alt = Trace::from_scalars(&sq(), (0..n).map(|k| (k % 2) as f64)).unwrap();
        assert!(matches!(
            distance_limit_check(&alt, &ys, &Point::scalar(0.0), &Point::scalar(2.0), 1e-4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn uniqueness_constant_for_squares() {
        assert_eq!(limit_uniqueness_constant(&sq()), Some(4.0));
    }
}
