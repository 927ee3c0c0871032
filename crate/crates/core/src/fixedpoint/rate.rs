use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::Trace;

/// A failed inequality of [`rate_bound_check`]. Indices are trace positions,
/// counted from `x_0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateViolation {
    pub n: usize,
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub k: f64,
    pub tol: f64,
    pub step_check: bool,
    pub pair_check: bool,
    /// `d(x_n, x_{n+1}) > k·d(x_{n−1}, x_n) + tol`, reported with `m = n + 1`.
    pub step_violations: Vec<RateViolation>,
    /// `d(x_m, x_n) > kⁿ/(1−k)·d(x_1, x_0) + Σ_{i=n}^{m−2} φ(x_m, x_i, x_{i+1}) + tol`.
    pub pair_violations: Vec<RateViolation>,
}

impl RateReport {
    pub fn passes(&self) -> bool {
        self.step_check && self.pair_check
    }
}

/// Checks the geometric step decay and the resulting pairwise bound along a
/// Picard trace, with the perturbation terms the chained triangle inequality
/// picks up. The trace is read as `x_0, x_1, …` whatever its start index.
pub fn rate_bound_check(trace: &Trace, k: f64, tol: f64) -> Result<RateReport> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::input(format!("k must lie in (0, 1), got {k}")));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::input(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    if trace.len() < 3 {
        return Err(Error::input("rate check needs at least three points"));
    }
    let steps = trace.step_dists();
    let step_violations: Vec<RateViolation> = (1..steps.len())
        .filter_map(|n| {
            let rhs = k * steps[n - 1] + tol;
            (steps[n] > rhs).then(|| RateViolation {
                n,
                m: n + 1,
                lhs: steps[n],
                rhs,
            })
        })
        .collect();

    let pts = trace.points();
    let space = trace.space();
    let head = steps[0] / (1.0 - k);
    let per_m: Vec<Result<Vec<RateViolation>>> = (1..pts.len())
        .into_par_iter()
        .map(|m| {
            let mut out = Vec::new();
            // phi_sum = Σ_{i=n}^{m−2} φ(x_m, x_i, x_{i+1}), built from n = m−1 down
            let mut phi_sum = 0.0;
            for n in (0..m).rev() {
                if n + 2 <= m {
                    phi_sum += space.phi_term(&pts[m], &pts[n], &pts[n + 1])?;
                }
                let lhs = space.distance(&pts[m], &pts[n])?;
                let rhs = k.powi(n as i32) * head + phi_sum + tol;
                if lhs > rhs {
                    out.push(RateViolation { n, m, lhs, rhs });
                }
            }
            out.reverse();
            Ok(out)
        })
        .collect();
    let mut pair_violations = Vec::new();
    for v in per_m {
        pair_violations.extend(v?);
    }
    Ok(RateReport {
        k,
        tol,
        step_check: step_violations.is_empty(),
        pair_check: pair_violations.is_empty(),
        step_violations,
        pair_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::squared_euclidean;
    use crate::point::BoxDomain;

    fn geometric(len: i32) -> Trace {
        let s = squared_euclidean(BoxDomain::cube(1, -2.0, 2.0).unwrap());
        Trace::from_scalars(&s, (0..len).map(|n| 0.5f64.powi(n)))
            .unwrap()
            .with_start_index(0)
    }

    #[test]
    fn exact_quarter_ratio() {
        let r = rate_bound_check(&geometric(20), 0.25, 0.0).unwrap();
        assert!(r.step_check);
        assert!(r.pair_check, "{:?}", r.pair_violations.first());
    }

    #[test]
    fn smaller_k_fails_every_step() {
        let t = geometric(20);
        let r = rate_bound_check(&t, 0.2, 0.0).unwrap();
        assert_eq!(r.step_violations.len(), t.step_dists().len() - 1);
        assert!(!r.passes());
    }

    #[test]
    fn preconditions() {
        assert!(rate_bound_check(&geometric(2), 0.5, 0.0).is_err());
        assert!(rate_bound_check(&geometric(5), 1.0, 0.0).is_err());
    }
}
