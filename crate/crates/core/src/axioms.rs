//! Sampled falsification of the φ-metric axioms.
//!
//! Sampling can only find violations. A passing verdict therefore reads
//! "no violation found" and says nothing about unsampled points.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::sampler::{PointStream, Sampler};
use crate::space::{ContinuityMode, PhiMetricSpace};

/// Default absolute tolerance for the inequality checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Mixed into the sampler seed when an empirical modulus has to be estimated
/// before it is checked, so estimation and validation use different draws.
const ESTIMATION_SEED_MIX: u64 = 0x5851_F42D_4C95_7F2D;

/// Deepest halving used when shrinking a sample toward an anchor.
const MAX_HALVINGS: u32 = 80;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AxiomId {
    #[serde(rename = "nonnegativity")]
    NonNegative,
    /// `d(x,y) = 0 ⇔ x = y`
    #[serde(rename = "d_phi1")]
    Identity,
    /// `d(x,y) = d(y,x)`
    #[serde(rename = "d_phi2")]
    Symmetry,
    /// perturbed triangle inequality
    #[serde(rename = "d_phi3")]
    Triangle,
    /// `φ(x,y,z) = 0` for `z ∈ {x,y}`
    #[serde(rename = "phi1")]
    PhiVanishes,
    /// `φ(x,y,z) = φ(y,x,z)`
    #[serde(rename = "phi2")]
    PhiSymmetry,
    /// continuity of `φ` at the endpoints
    #[serde(rename = "phi3")]
    PhiContinuity,
}

impl AxiomId {
    const STRUCTURAL: [AxiomId; 6] = [
        AxiomId::NonNegative,
        AxiomId::Identity,
        AxiomId::Symmetry,
        AxiomId::Triangle,
        AxiomId::PhiVanishes,
        AxiomId::PhiSymmetry,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoViolationFound,
    Fail,
}

/// One recorded violation: `lhs` should not exceed `rhs` (for φ3, `lhs` is
/// the offending `φ` value and `rhs` the `ε` it should stay below).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: AxiomId,
    pub points: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

/// Distinct points whose distance is positive but below the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suspicion {
    pub points: Vec<Point>,
    pub distance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusSource {
    Analytic,
    Empirical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusUse {
    pub eps: f64,
    pub delta: f64,
    pub source: ModulusSource,
    pub mode: ContinuityMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub space: String,
    pub verdicts: BTreeMap<AxiomId, Verdict>,
    pub witnesses: Vec<Witness>,
    pub suspicious: Vec<Suspicion>,
    pub samples_used: usize,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moduli: Vec<ModulusUse>,
}

impl AxiomReport {
    fn assemble(
        space: &PhiMetricSpace,
        axioms: &[AxiomId],
        mut witnesses: Vec<Witness>,
        mut suspicious: Vec<Suspicion>,
        samples_used: usize,
        tolerance: f64,
        moduli: Vec<ModulusUse>,
    ) -> Self {
        witnesses.sort_by(cmp_witness);
        suspicious.sort_by(|a, b| cmp_points(&a.points, &b.points));
        let verdicts = axioms
            .iter()
            .map(|&id| {
                let v = if witnesses.iter().any(|w| w.axiom == id) {
                    Verdict::Fail
                } else {
                    Verdict::NoViolationFound
                };
                (id, v)
            })
            .collect();
        AxiomReport {
            space: space.label().to_owned(),
            verdicts,
            witnesses,
            suspicious,
            samples_used,
            tolerance,
            moduli,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts
            .values()
            .all(|v| *v == Verdict::NoViolationFound)
    }

    pub fn verdict(&self, axiom: AxiomId) -> Option<Verdict> {
        self.verdicts.get(&axiom).copied()
    }

    pub fn witnesses_for(&self, axiom: AxiomId) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.axiom == axiom)
    }

    pub fn failed(&self) -> Vec<AxiomId> {
        self.verdicts
            .iter()
            .filter(|(_, v)| **v == Verdict::Fail)
            .map(|(k, _)| *k)
            .collect()
    }
}

fn cmp_points(a: &[Point], b: &[Point]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        match p.total_cmp(q) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn cmp_witness(a: &Witness, b: &Witness) -> Ordering {
    a.axiom
        .cmp(&b.axiom)
        .then_with(|| cmp_points(&a.points, &b.points))
        .then_with(|| a.lhs.total_cmp(&b.lhs))
        .then_with(|| a.rhs.total_cmp(&b.rhs))
        .then_with(|| {
            a.delta
                .unwrap_or(f64::NAN)
                .total_cmp(&b.delta.unwrap_or(f64::NAN))
        })
}

#[derive(Default)]
struct Findings {
    witnesses: Vec<Witness>,
    suspicious: Vec<Suspicion>,
}

impl Findings {
    fn violation(&mut self, axiom: AxiomId, points: &[&Point], lhs: f64, rhs: f64) {
        self.witnesses.push(Witness {
            axiom,
            points: points.iter().map(|p| (*p).clone()).collect(),
            lhs,
            rhs,
            delta: None,
        });
    }
}

/// Pairs and rotations examined for each sampled triple `(x, y, z)`.
fn check_triple(space: &PhiMetricSpace, tol: f64, t: &[Point; 3]) -> Result<Findings> {
    let mut f = Findings::default();
    let [x, y, z] = t;

    for a in [x, y, z] {
        let d = space.raw_distance(a, a)?;
        if d.abs() > tol {
            f.violation(AxiomId::Identity, &[a, a], d, 0.0);
        } else if d != 0.0 {
            f.suspicious.push(Suspicion {
                points: vec![a.clone(), a.clone()],
                distance: d,
            });
        }
    }

    for (a, b) in [(x, y), (x, z), (y, z)] {
        let ab = space.raw_distance(a, b)?;
        let ba = space.raw_distance(b, a)?;
        for v in [ab, ba] {
            if v < 0.0 {
                f.violation(AxiomId::NonNegative, &[a, b], v, 0.0);
            }
        }
        if (ab - ba).abs() > tol {
            f.violation(AxiomId::Symmetry, &[a, b], ab, ba);
        }
        if a != b {
            if ab == 0.0 {
                f.violation(AxiomId::Identity, &[a, b], ab, 0.0);
            } else if ab.abs() <= tol {
                f.suspicious.push(Suspicion {
                    points: vec![a.clone(), b.clone()],
                    distance: ab,
                });
            }
        }
    }

    // Endpoints (a, b) with the third point c in the middle.
    for (a, b, c) in [(x, y, z), (x, z, y), (y, z, x)] {
        let ab = space.raw_distance(a, b)?;
        let ac = space.raw_distance(a, c)?;
        let cb = space.raw_distance(c, b)?;
        let phi = space.raw_phi(a, b, c)?;
        let phi_swapped = space.raw_phi(b, a, c)?;
        if phi < 0.0 {
            f.violation(AxiomId::NonNegative, &[a, b, c], phi, 0.0);
        }
        let rhs = ac + cb + phi;
        if ab > rhs + tol {
            f.violation(AxiomId::Triangle, &[a, b, c], ab, rhs);
        }
        if (phi - phi_swapped).abs() > tol {
            f.violation(AxiomId::PhiSymmetry, &[a, b, c], phi, phi_swapped);
        }
        for end in [a, b] {
            let v = space.raw_phi(a, b, end)?;
            if v.abs() > tol {
                f.violation(AxiomId::PhiVanishes, &[a, b, end], v, 0.0);
            }
        }
    }
    Ok(f)
}

fn validate_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Evaluates identity, symmetry, the perturbed triangle inequality and the
/// two algebraic φ axioms on `sampler.count` sampled triples, plus the forced
/// coincident cases `d(x,x)`, `φ(x,y,x)`, `φ(x,y,y)`.
pub fn check_axioms(space: &PhiMetricSpace, sampler: &Sampler, tol: f64) -> Result<AxiomReport> {
    validate_tolerance(tol)?;
    let mut stream = sampler.stream(space.dim(), space.domain())?;
    let triples: Vec<[Point; 3]> = (0..sampler.count)
        .map(|_| {
            Ok([
                stream.next_point()?,
                stream.next_point()?,
                stream.next_point()?,
            ])
        })
        .collect::<Result<_>>()?;

    let results: Vec<Result<Findings>> = triples
        .par_iter()
        .map(|t| check_triple(space, tol, t))
        .collect();

    let mut witnesses = Vec::new();
    let mut suspicious = Vec::new();
    for r in results {
        let f = r?;
        witnesses.extend(f.witnesses);
        suspicious.extend(f.suspicious);
    }
    Ok(AxiomReport::assemble(
        space,
        &AxiomId::STRUCTURAL,
        witnesses,
        suspicious,
        triples.len(),
        tol,
        Vec::new(),
    ))
}

/// Moves from `anchor` toward `target` by `t = 2^-k`, halving until
/// `d(anchor, ·) < delta`. Falls back to the anchor itself.
fn shrink_toward(
    space: &PhiMetricSpace,
    anchor: &Point,
    target: &Point,
    delta: f64,
) -> Result<(Point, f64)> {
    let mut t = 1.0;
    for _ in 0..=MAX_HALVINGS {
        let p = anchor.lerp(target, t);
        if space.raw_distance(anchor, &p)? < delta {
            return Ok((p, t));
        }
        t *= 0.5;
    }
    Ok((anchor.clone(), 0.0))
}

/// Draws a triple `(x, y, z)` meeting the mode's closeness condition for
/// `delta`. Even draws sit at the first halving that satisfies it, which is
/// the hardest case; odd draws are pulled further in by a uniform factor.
fn conditioned_triple(
    space: &PhiMetricSpace,
    stream: &mut PointStream,
    delta: f64,
    i: usize,
) -> Result<[Point; 3]> {
    let jitter = if i % 2 == 1 { stream.unit() } else { 1.0 };
    match space.continuity() {
        ContinuityMode::Either => {
            let anchor = stream.next_point()?;
            let far = stream.next_point()?;
            let w = stream.next_point()?;
            let (_, t) = shrink_toward(space, &anchor, &w, delta)?;
            let z = anchor.lerp(&w, t * jitter);
            Ok(if i % 4 < 2 {
                [anchor, far, z]
            } else {
                [far, anchor, z]
            })
        }
        ContinuityMode::Both => {
            let x = stream.next_point()?;
            let w1 = stream.next_point()?;
            let w2 = stream.next_point()?;
            let (_, t1) = shrink_toward(space, &x, &w1, delta)?;
            let z = x.lerp(&w1, t1 * jitter);
            let (_, t2) = shrink_toward(space, &z, &w2, delta)?;
            let y = z.lerp(&w2, t2 * jitter);
            Ok([x, y, z])
        }
    }
}

/// Checks the continuity axiom φ3 on a grid of `ε` values.
///
/// For each `ε` the space's analytic modulus supplies `δ`; spaces without
/// one fall back to [`estimate_modulus`] on an independent stream. Triples are
/// then drawn so that they meet the space's [`ContinuityMode`] condition at
/// `δ`, and every `φ(x,y,z) ≥ ε` is recorded together with the `δ` used.
pub fn check_phi_continuity(
    space: &PhiMetricSpace,
    sampler: &Sampler,
    eps_grid: &[f64],
) -> Result<AxiomReport> {
    if eps_grid.is_empty() {
        return Err(Error::input("eps grid is empty"));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::input(format!(
            "eps values must be positive, got {e}"
        )));
    }
    let mode = space.continuity();
    let mut witnesses = Vec::new();
    let mut moduli = Vec::new();
    let mut used = 0;

    for &eps in eps_grid {
        let (delta, source) = match space.modulus(eps) {
            Some(d) => (d, ModulusSource::Analytic),
            None => {
                let est = sampler
                    .clone()
                    .with_seed(sampler.seed ^ ESTIMATION_SEED_MIX);
                (
                    estimate_modulus(space, &est, eps)?,
                    ModulusSource::Empirical,
                )
            }
        };
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::config(format!(
                "modulus returned non-positive delta {delta} for eps {eps}"
            )));
        }
        moduli.push(ModulusUse {
            eps,
            delta,
            source,
            mode,
        });

        let mut stream = sampler.stream(space.dim(), space.domain())?;
        let triples: Vec<[Point; 3]> = (0..sampler.count)
            .map(|i| conditioned_triple(space, &mut stream, delta, i))
            .collect::<Result<_>>()?;

        let results: Vec<Result<Option<Witness>>> = triples
            .par_iter()
            .map(|[x, y, z]| {
                let c = mode.conditioning(space.raw_distance(x, z)?, space.raw_distance(y, z)?);
                if c >= delta {
                    return Ok(None);
                }
                let phi = space.raw_phi(x, y, z)?;
                Ok((phi >= eps).then(|| Witness {
                    axiom: AxiomId::PhiContinuity,
                    points: vec![x.clone(), y.clone(), z.clone()],
                    lhs: phi,
                    rhs: eps,
                    delta: Some(delta),
                }))
            })
            .collect();
        for r in results {
            if let Some(w) = r? {
                witnesses.push(w);
            }
        }
        used += triples.len();
    }

    Ok(AxiomReport::assemble(
        space,
        &[AxiomId::PhiContinuity],
        witnesses,
        Vec::new(),
        used,
        0.0,
        moduli,
    ))
}

/// Decreasing candidate ladder `2^top, 2^(top-1), …, 2^bottom` for
/// [`estimate_modulus_with`], by default `2^10` down to `2^-1000`. Squaring
/// raises moduli to high powers of `ε`, hence the depth.
///
/// The estimate steps `safety_rungs` rungs below
/// the largest passing rung, to absorb offenders the sample missed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusLadder {
    pub top_exp: i32,
    pub bottom_exp: i32,
    pub safety_rungs: u32,
}

impl Default for ModulusLadder {
    fn default() -> Self {
        ModulusLadder {
            top_exp: 10,
            bottom_exp: -1000,
            safety_rungs: 1,
        }
    }
}

impl ModulusLadder {
    pub fn top(&self) -> f64 {
        2f64.powi(self.top_exp)
    }

    pub fn bottom(&self) -> f64 {
        2f64.powi(self.bottom_exp)
    }

    /// Largest rung not exceeding `limit`.
    fn largest_at_most(&self, limit: f64) -> Option<i32> {
        (self.bottom_exp..=self.top_exp)
            .rev()
            .find(|k| 2f64.powi(*k) <= limit)
    }
}

/// Scales `2^-j`, `j = 0..=SCALES`, visited for every sampled configuration.
const SCALES: i32 = 60;
/// Bisection steps between the smallest offending scale and the next one.
const BISECTIONS: u32 = 40;

/// [`estimate_modulus_with`] on the default ladder.
pub fn estimate_modulus(space: &PhiMetricSpace, sampler: &Sampler, eps: f64) -> Result<f64> {
    estimate_modulus_with(space, sampler, eps, &ModulusLadder::default())
}

/// A sampled configuration: the triple at scale `t` is obtained by moving
/// from the anchor toward the direction points by `t·u`.
struct Ray {
    anchor: Point,
    other: Point,
    w1: Point,
    w2: Point,
    u1: f64,
    u2: f64,
    flip: bool,
}

impl Ray {
    fn at(&self, mode: ContinuityMode, t: f64) -> [Point; 3] {
        match mode {
            ContinuityMode::Either => {
                let z = self.anchor.lerp(&self.w1, t * self.u1);
                if self.flip {
                    [self.other.clone(), self.anchor.clone(), z]
                } else {
                    [self.anchor.clone(), self.other.clone(), z]
                }
            }
            ContinuityMode::Both => {
                let z = self.anchor.lerp(&self.w1, t * self.u1);
                let y = z.lerp(&self.w2, t * self.u2);
                [self.anchor.clone(), y, z]
            }
        }
    }
}

/// Conditioning distance of the triple if it violates `φ < eps`.
fn offender(space: &PhiMetricSpace, t: &[Point; 3], eps: f64) -> Result<Option<f64>> {
    let [x, y, z] = t;
    if space.raw_phi(x, y, z)? < eps {
        return Ok(None);
    }
    Ok(Some(space.continuity().conditioning(
        space.raw_distance(x, z)?,
        space.raw_distance(y, z)?,
    )))
}

/// What one ray shows about `φ ≥ eps`.
struct RayFinding {
    /// Smallest conditioning distance among offending triples.
    smallest: f64,
    /// `φ ≥ eps` persists at the finest scale where the triple is still
    /// made of distinct points: the hallmark of a discontinuity.
    persists: bool,
}

fn degenerate(t: &[Point; 3]) -> bool {
    let [x, y, z] = t;
    z == x || z == y
}

fn ray_scan(space: &PhiMetricSpace, ray: &Ray, eps: f64) -> Result<RayFinding> {
    let mode = space.continuity();
    let mut smallest = f64::INFINITY;
    let mut deepest: Option<i32> = None;
    let mut finest_offends = false;
    for j in 0..=SCALES {
        let t = ray.at(mode, 2f64.powi(-j));
        if degenerate(&t) {
            break;
        }
        let hit = offender(space, &t, eps)?;
        finest_offends = hit.is_some();
        if let Some(c) = hit {
            smallest = smallest.min(c);
            deepest = Some(j);
        }
    }
    if let Some(j) = deepest.filter(|j| *j < SCALES && !finest_offends) {
        let (mut hi, mut lo) = (2f64.powi(-j), 2f64.powi(-j - 1));
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (hi + lo);
            match offender(space, &ray.at(mode, mid), eps)? {
                Some(c) => {
                    smallest = smallest.min(c);
                    hi = mid;
                }
                None => lo = mid,
            }
        }
    }
    Ok(RayFinding {
        smallest,
        persists: finest_offends,
    })
}

/// Empirical continuity modulus: a ladder rung `δ` such that no sampled
/// triple meeting the closeness condition at `δ` has `φ ≥ eps`.
///
/// Each sampled configuration is a ray from an anchor point, visited at the
/// scales `2^-j`, `j ∈ [0, 60]`, and bisected where it stops offending, so a
/// single pass measures the smallest conditioning distance of any offending
/// triple. The answer is the largest rung at or below that distance, lowered
/// by the ladder's safety rungs; with no offender at all it is the top rung.
///
/// Fails with [`Error::ModulusNotFound`] when no rung qualifies, or when some
/// ray still offends at the finest scale at which its points stay distinct.
pub fn estimate_modulus_with(
    space: &PhiMetricSpace,
    sampler: &Sampler,
    eps: f64,
    ladder: &ModulusLadder,
) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::input(format!("eps must be positive, got {eps}")));
    }
    if ladder.top_exp < ladder.bottom_exp {
        return Err(Error::config("modulus ladder is empty"));
    }
    let mut stream = sampler.stream(space.dim(), space.domain())?;
    let mut rays = Vec::with_capacity(sampler.count);
    for i in 0..sampler.count {
        rays.push(Ray {
            anchor: stream.next_point()?,
            other: stream.next_point()?,
            w1: stream.next_point()?,
            w2: stream.next_point()?,
            u1: stream.unit(),
            u2: stream.unit(),
            flip: i % 2 == 1,
        });
    }
    let findings: Vec<Result<RayFinding>> =
        rays.par_iter().map(|r| ray_scan(space, r, eps)).collect();
    let mut smallest = f64::INFINITY;
    let mut persists = false;
    for f in findings {
        let f = f?;
        smallest = smallest.min(f.smallest);
        persists |= f.persists;
    }
    let not_found = Error::ModulusNotFound {
        eps,
        smallest: ladder.bottom(),
    };
    if persists {
        return Err(not_found);
    }
    if smallest == f64::INFINITY {
        return Ok(ladder.top());
    }
    match ladder.largest_at_most(smallest) {
        Some(k) if k - ladder.safety_rungs as i32 >= ladder.bottom_exp => {
            Ok(2f64.powi(k - ladder.safety_rungs as i32))
        }
        _ => Err(not_found),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::BoxDomain;

    fn squared_line() -> PhiMetricSpace {
        PhiMetricSpace::new(
            "sq",
            1,
            |x, y| (x.x() - y.x()).powi(2),
            |x, y, z| 2.0 * ((x.x() - z.x()).powi(2) * (z.x() - y.x()).powi(2)).sqrt(),
        )
        .with_domain(BoxDomain::cube(1, -10.0, 10.0).unwrap())
    }

    #[test]
    fn rejects_bad_tolerance_and_grid() {
        let s = squared_line();
        let sampler = Sampler::uniform(1, 10);
        assert!(check_axioms(&s, &sampler, 0.0).is_err());
        assert!(check_phi_continuity(&s, &sampler, &[]).is_err());
        assert!(check_phi_continuity(&s, &sampler, &[1.0, -1.0]).is_err());
    }

    #[test]
    fn non_positive_modulus_is_config_error() {
        let s = squared_line().with_modulus(|_| 0.0);
        let err = check_phi_continuity(&s, &Sampler::uniform(1, 10), &[1.0]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn identity_violation_on_collapsed_distance() {
        // d ≡ 0 never separates distinct points.
        let s = PhiMetricSpace::new("zero", 1, |_, _| 0.0, |_, _, _| 0.0)
            .with_domain(BoxDomain::cube(1, 0.0, 1.0).unwrap());
        let r = check_axioms(&s, &Sampler::uniform(3, 20), 1e-9).unwrap();
        assert_eq!(r.verdict(AxiomId::Identity), Some(Verdict::Fail));
        assert_eq!(
            r.verdict(AxiomId::Triangle),
            Some(Verdict::NoViolationFound)
        );
    }

    #[test]
    fn tiny_distances_are_suspicious_not_failures() {
        let s = PhiMetricSpace::new(
            "tiny",
            1,
            |x, y| 1e-12 * (x.x() - y.x()).abs(),
            |_, _, _| 0.0,
        )
        .with_domain(BoxDomain::cube(1, 0.0, 1.0).unwrap());
        let r = check_axioms(&s, &Sampler::uniform(3, 20), 1e-9).unwrap();
        assert_eq!(
            r.verdict(AxiomId::Identity),
            Some(Verdict::NoViolationFound)
        );
        assert!(!r.suspicious.is_empty());
    }

    #[test]
    fn asymmetric_space_fails_symmetry_and_phi_symmetry() {
        let s = PhiMetricSpace::new(
            "lopsided",
            1,
            |x, y| (x.x() - y.x()).abs() * if x.x() < y.x() { 1.0 } else { 2.0 },
            |x, _, z| (x.x() - z.x()).abs(),
        )
        .with_domain(BoxDomain::cube(1, 0.0, 1.0).unwrap());
        let r = check_axioms(&s, &Sampler::uniform(5, 50), 1e-9).unwrap();
        assert_eq!(r.verdict(AxiomId::Symmetry), Some(Verdict::Fail));
        assert_eq!(r.verdict(AxiomId::PhiSymmetry), Some(Verdict::Fail));
        // φ(x,y,x) = 0 but φ(x,y,y) = |x − y| ≠ 0
        assert_eq!(r.verdict(AxiomId::PhiVanishes), Some(Verdict::Fail));
    }

    #[test]
    fn evaluation_error_propagates_with_points() {
        let s = PhiMetricSpace::new("nan", 1, |_, _| f64::NAN, |_, _, _| 0.0)
            .with_domain(BoxDomain::cube(1, 0.0, 1.0).unwrap());
        assert!(matches!(
            check_axioms(&s, &Sampler::uniform(3, 5), 1e-9),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn fail_iff_witness() {
        let s = PhiMetricSpace::new("no-phi", 1, |x, y| (x.x() - y.x()).powi(2), |_, _, _| 0.0)
            .with_domain(BoxDomain::cube(1, -10.0, 10.0).unwrap());
        let r = check_axioms(&s, &Sampler::uniform(9, 200), 1e-9).unwrap();
        for (id, v) in &r.verdicts {
            assert_eq!(*v == Verdict::Fail, r.witnesses_for(*id).next().is_some());
        }
    }

    #[test]
    fn ladder_lookup() {
        let l = ModulusLadder::default();
        assert_eq!(l.largest_at_most(f64::INFINITY), Some(10));
        assert_eq!(l.largest_at_most(0.3), Some(-2));
        assert_eq!(l.largest_at_most(0.25), Some(-2));
        assert_eq!(l.largest_at_most(0.0), None);
    }
}
