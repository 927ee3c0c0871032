//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use phimetric::axioms::{check_axioms, check_phi_continuity, AxiomId};
use phimetric::constructions::{controls, Recipe};
use phimetric::fixedpoint::{
    banach_solve, certify, edelstein_solve, multi_start, random_starts, rate_bound_check,
    ContractionKind, FixedPointResult, SelfMap,
};
use phimetric::topology::{
    diameter, product_ball_inclusion_check, stone_refinement, verify_refinement, Cover, CoverSet,
    RefinementCheck,
};
use phimetric::*;

const SEED: u64 = 42;
const SAMPLES: usize = 10_000;
const AXIOM_TOL: f64 = 1e-9;
const SOLVER_TOL: f64 = 1e-18;
const EPS_GRID: [f64; 3] = [1.0, 0.1, 0.01];

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sq1(lo: f64, hi: f64) -> PhiMetricSpace {
    squared_euclidean(BoxDomain::cube(1, lo, hi).unwrap())
}

/// Shipped constructions on their declared boxes.
fn shipped() -> Vec<(String, PhiMetricSpace)> {
    let table: [(&str, f64, &str); 11] = [
        ("squared-euclidean", 10.0, r#"{"id":"squared-euclidean"}"#),
        ("s-induced", 10.0, r#"{"id":"s-induced"}"#),
        ("b-induced K=1.5", 5.0, r#"{"id":"b-induced","k":1.5}"#),
        ("b-induced K=2", 5.0, r#"{"id":"b-induced","k":2.0}"#),
        ("b-induced K=4", 5.0, r#"{"id":"b-induced","k":4.0}"#),
        (
            "strong-b-induced",
            5.0,
            r#"{"id":"strong-b-induced","k":2.0,"l":1.0}"#,
        ),
        (
            "lp-quasinorm p=1/2",
            1.0,
            r#"{"id":"lp-quasinorm","p":0.5}"#,
        ),
        (
            "lp-metric-squared p=1/2",
            1.0,
            r#"{"id":"lp-metric-squared","p":0.5}"#,
        ),
        ("discrete", 10.0, r#"{"id":"discrete"}"#),
        (
            "square(squared-euclidean)",
            5.0,
            r#"{"id":"square","of":{"id":"squared-euclidean"}}"#,
        ),
        (
            "product(squared-euclidean, b-induced K=2, discrete)",
            2.0,
            r#"{"id":"product","factors":[{"id":"squared-euclidean"},{"id":"b-induced","k":2.0},{"id":"discrete"}]}"#,
        ),
    ];
    table
        .iter()
        .map(|(name, half, json)| {
            let recipe: Recipe = serde_json::from_str(json).expect("recipe");
            let b = BoxDomain::cube(2, -half, *half).unwrap();
            (name.to_string(), recipe.build(&b).expect("build"))
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let sampler = Sampler::uniform(SEED, SAMPLES);
    let mut slowest = Duration::ZERO;
    for (name, space) in shipped() {
        let start = Instant::now();
        let axioms =
            check_axioms(&space, &sampler, AXIOM_TOL).map_err(|e| format!("{name}: {e}"))?;
        ensure(axioms.all_pass(), || {
            format!("{name}: failed {:?}", axioms.failed())
        })?;
        let cont = check_phi_continuity(&space, &sampler, &EPS_GRID)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(cont.all_pass(), || format!("{name}: phi continuity failed"))?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(5), || {
            format!("{name}: took {took:?}")
        })?;
        slowest = slowest.max(took);
    }
    Ok(format!("11 spaces, slowest {slowest:.2?}"))
}

fn criterion_2(banach_traces: &mut Vec<FixedPointResult>) -> Outcome {
    let space = sq1(-10.0, 10.0);
    let t = SelfMap::half_sine();
    let cert = certify(
        &space,
        &t,
        &Sampler::uniform(SEED, SAMPLES),
        ContractionKind::Banach,
    )
    .map_err(|e| e.to_string())?;
    ensure(cert.k_estimate <= 0.25 + 1e-12, || {
        format!("k_estimate {}", cert.k_estimate)
    })?;
    let r =
        banach_solve(&space, &t, &Point::scalar(1.0), SOLVER_TOL, 40).map_err(|e| e.to_string())?;
    ensure(r.point.x().abs() <= 1e-8, || format!("x* = {}", r.point))?;
    ensure(r.iterations <= 40, || {
        format!("{} iterations", r.iterations)
    })?;
    let rate = rate_bound_check(&r.trace, 0.25, 1e-9).map_err(|e| e.to_string())?;
    ensure(rate.step_check, || {
        format!("step check: {:?}", rate.step_violations.first())
    })?;
    ensure(rate.pair_check, || {
        format!("pair check: {:?}", rate.pair_violations.first())
    })?;
    let msg = format!(
        "k_estimate {:.6}, x* = {:.3e} after {} iterations",
        cert.k_estimate,
        r.point.x(),
        r.iterations
    );
    banach_traces.push(r.with_certificate(&cert));
    Ok(msg)
}

fn criterion_3() -> Outcome {
    let space = sq1(-2.0, 2.0);
    let t = SelfMap::kannan_piecewise();
    let cert = certify(
        &space,
        &t,
        &Sampler::uniform(SEED, SAMPLES),
        ContractionKind::Kannan,
    )
    .map_err(|e| e.to_string())?;
    ensure(cert.k_estimate <= 0.125 + 1e-12, || {
        format!("k_estimate {}", cert.k_estimate)
    })?;
    let starts = random_starts(&t, &Sampler::uniform(SEED, 16)).map_err(|e| e.to_string())?;
    let runs = multi_start(
        ContractionKind::Kannan,
        &space,
        &t,
        &starts,
        SOLVER_TOL,
        1000,
    )
    .map_err(|e| e.to_string())?;
    let xs: Vec<f64> = runs.results.iter().map(|r| r.point.x()).collect();
    ensure(xs.iter().all(|x| x.abs() <= 1e-7), || {
        format!("fixed points {xs:?}")
    })?;
    let spread =
        xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread <= 1e-7, || format!("spread {spread}"))?;
    Ok(format!(
        "k_estimate {:.6}, 16 starts, spread {spread:.1e}",
        cert.k_estimate
    ))
}

fn criterion_4() -> Outcome {
    let space = sq1(-FRAC_PI_2, FRAC_PI_2);
    let t = SelfMap::arctan_shift();
    let cert = certify(
        &space,
        &t,
        &Sampler::uniform(SEED, SAMPLES),
        ContractionKind::Edelstein,
    )
    .map_err(|e| e.to_string())?;
    ensure(cert.samples == SAMPLES, || {
        format!("{} distinct pairs", cert.samples)
    })?;
    ensure(cert.violation_count == 0, || {
        format!("{} violations", cert.violation_count)
    })?;
    let r = edelstein_solve(&space, &t, &Point::scalar(1.0), SOLVER_TOL, 200)
        .map_err(|e| e.to_string())?;
    ensure(r.point.x().abs() <= 1e-6, || format!("x* = {}", r.point))?;
    ensure(r.iterations <= 200, || {
        format!("{} iterations", r.iterations)
    })?;
    let steps = r.trace.step_dists();
    for w in steps.windows(2) {
        if w[0] >= SOLVER_TOL {
            ensure(w[1] < w[0], || format!("steps {} then {}", w[0], w[1]))?;
        }
    }
    Ok(format!(
        "0 violations, x* = {:.3e} after {} iterations",
        r.point.x(),
        r.iterations
    ))
}

fn criterion_5(banach_traces: &mut Vec<FixedPointResult>) -> Outcome {
    let space = sq1(-10.0, 10.0);
    let t = SelfMap::half_sine();
    let starts = random_starts(&t, &Sampler::uniform(SEED + 1, 16)).map_err(|e| e.to_string())?;
    let runs = multi_start(
        ContractionKind::Banach,
        &space,
        &t,
        &starts,
        SOLVER_TOL,
        1000,
    )
    .map_err(|e| e.to_string())?;
    banach_traces.extend(runs.results);
    let mut pairs = 0;
    for r in banach_traces.iter() {
        if r.trace.len() < 3 {
            continue;
        }
        let rate = rate_bound_check(&r.trace, 0.25, 1e-9).map_err(|e| e.to_string())?;
        ensure(rate.pair_check, || {
            format!("pair bound: {:?}", rate.pair_violations.first())
        })?;
        pairs += r.trace.len() * (r.trace.len() - 1) / 2;
    }
    Ok(format!("{} traces, {pairs} pairs", banach_traces.len()))
}

/// Random cloud and ball cover: radii scaled by 1.25 until every point is
/// covered.
fn random_cover_case(seed: u64) -> (PointCloud, Cover) {
    let space = squared_euclidean(BoxDomain::cube(2, 0.0, 1.0).unwrap());
    let mut st = Sampler::uniform(seed, 1).stream(2, space.domain()).unwrap();
    let n = 50 + st.below(151) as usize;
    let k = 3 + st.below(6) as usize;
    let pts = st.points(n).unwrap();
    let centers = st.points(k).unwrap();
    let base: Vec<f64> = (0..k).map(|_| 0.05 + 0.25 * st.unit()).collect();
    let cloud = PointCloud::new(&space, pts).unwrap();
    let mut rho = 1.0;
    loop {
        let sets: Vec<CoverSet> = (0..k)
            .map(|j| CoverSet {
                id: format!("U{j}"),
                indices: (0..n)
                    .filter(|&p| {
                        space.distance(cloud.point(p), &centers[j]).unwrap() < rho * base[j]
                    })
                    .collect(),
            })
            .collect();
        if let Ok(cover) = Cover::new(n, sets) {
            return (cloud, cover);
        }
        rho *= 1.25;
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut members = 0;
    for case in 0..20u64 {
        let (cloud, cover) = random_cover_case(SEED + case);
        let fam = stone_refinement(&cloud, &cover).map_err(|e| format!("cloud {case}: {e}"))?;
        let report =
            verify_refinement(&cloud, &cover, &fam).map_err(|e| format!("cloud {case}: {e}"))?;
        ensure(report.all_pass(), || {
            format!(
                "cloud {case}: {} violations, first {:?}",
                report.violations.len(),
                report.violations.first()
            )
        })?;
        members += fam.members.len();
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("20 clouds, {members} members, {took:.2?}"))
}

fn criterion_7() -> Outcome {
    let disc = discrete_space(2);
    for (name, space) in shipped() {
        let prod = product(&[space.clone(), disc.clone()]).map_err(|e| e.to_string())?;
        let mut st = Sampler::uniform(SEED, 1).stream(2, space.domain()).unwrap();
        for _ in 0..SAMPLES {
            let x = st.next_point().unwrap();
            let y = st.next_point().unwrap();
            let (a, b) = (
                prod.distance(&x, &y).unwrap(),
                space.distance(&x, &y).unwrap(),
            );
            ensure(a == b, || format!("{name}: {a} != {b} at {x}, {y}"))?;
        }
    }
    Ok(format!(
        "{} spaces x {SAMPLES} pairs, exact",
        shipped().len()
    ))
}

fn criterion_8() -> Outcome {
    let s1 = squared_euclidean(BoxDomain::cube(2, -1.0, 1.0).unwrap());
    let s2 = squared_euclidean(BoxDomain::cube(2, -1.0, 1.0).unwrap());
    let mut st = Sampler::uniform(SEED, 1).stream(2, s1.domain()).unwrap();
    for trial in 0..100 {
        let cloud = st.points(100).unwrap();
        let x = st.next_point().unwrap();
        let r = 0.01 + 2.0 * st.unit();
        let ok =
            product_ball_inclusion_check(&s1, &s2, &x, r, &cloud).map_err(|e| e.to_string())?;
        ensure(ok, || {
            format!("trial {trial}: inclusion fails at {x}, r = {r}")
        })?;
    }
    Ok("100 trials".into())
}

fn criterion_9() -> Outcome {
    let space = sq1(-1.0, 1.0);
    let bounds: Vec<(f64, f64)> = (1..=30).map(|n| (0.0, 0.5f64.powi(n))).collect();
    let fam = NestedFamily::intervals(&space, &bounds).map_err(|e| e.to_string())?;
    let p = cantor_intersection(&fam, 1e-12).map_err(|e| e.to_string())?;
    let d = space.distance(&p, &Point::scalar(0.0)).unwrap();
    ensure(d < 1e-12, || format!("d(p, 0) = {d}"))?;
    ensure(fam.sets().iter().all(|s| s.set.contains(&p)), || {
        format!("{p} misses a set")
    })?;
    Ok(format!("p = {p}, d(p, 0) = {d:.3e}"))
}

fn criterion_10() -> Outcome {
    let space = sq1(0.0, 1.0);
    let mut worst: f64 = 0.0;
    for n in [10usize, 100, 1000] {
        let mut pts: Vec<Point> = (1..=n).map(|k| Point::scalar(1.0 / k as f64)).collect();
        pts.push(Point::scalar(0.0));
        let cloud = PointCloud::new(&space, pts).map_err(|e| e.to_string())?;
        let a: Vec<usize> = (0..n).collect();
        let closure: Vec<usize> = (0..=n).collect();
        let gap = (diameter(&cloud, &closure).unwrap() - diameter(&cloud, &a).unwrap()).abs();
        let nf = n as f64;
        let bound = 2.0 / nf + 1.0 / (nf * nf);
        ensure(gap <= bound, || format!("N = {n}: gap {gap} > {bound}"))?;
        worst = worst.max(gap * nf);
    }
    Ok(format!("N in {{10, 100, 1000}}, max N·gap {worst:.4}"))
}

fn criterion_11() -> Outcome {
    let broken = controls::broken_phi_zero(BoxDomain::cube(2, -10.0, 10.0).unwrap());
    let report = check_axioms(&broken, &Sampler::uniform(SEED, SAMPLES), AXIOM_TOL)
        .map_err(|e| e.to_string())?;
    let witness = report.witnesses_for(AxiomId::Triangle).next().cloned();
    ensure(witness.is_some(), || {
        "phi = 0 space passed the triangle axiom".into()
    })?;

    let space = sq1(-1.0, 1.0);
    let reflection = SelfMap::affine(-1.0, 0.0, BoxDomain::cube(1, -1.0, 1.0).unwrap());
    let cert = certify(
        &space,
        &reflection,
        &Sampler::uniform(SEED, 1000),
        ContractionKind::Edelstein,
    )
    .map_err(|e| e.to_string())?;
    ensure(!cert.passes(), || "reflection passed certification".into())?;

    let (cloud, cover) = random_cover_case(SEED);
    let mut fam = stone_refinement(&cloud, &cover).map_err(|e| e.to_string())?;
    for m in &mut fam.members {
        m.i = 1;
    }
    let merged = verify_refinement(&cloud, &cover, &fam).map_err(|e| e.to_string())?;
    ensure(!merged.passes(RefinementCheck::Discreteness), || {
        "merged family passed discreteness".into()
    })?;

    // the same inputs give the same verdicts
    let again = check_axioms(&broken, &Sampler::uniform(SEED, SAMPLES), AXIOM_TOL)
        .map_err(|e| e.to_string())?;
    ensure(again == report, || {
        "axiom report is not reproducible".into()
    })?;
    ensure(
        verify_refinement(&cloud, &cover, &fam).unwrap() == merged,
        || "refinement report is not reproducible".into(),
    )?;

    Ok(format!(
        "triangle witness at ({}), {} certificate violations, {} discreteness violations",
        witness
            .map(|w| w
                .points
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", "))
            .unwrap_or_default(),
        cert.violation_count,
        merged
            .violations
            .iter()
            .filter(|v| v.check() == RefinementCheck::Discreteness)
            .count()
    ))
}

fn main() -> ExitCode {
    let mut banach_traces = Vec::new();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (
            1,
            "axiom conformance of shipped constructions",
            criterion_1(),
        ),
        (
            2,
            "Banach example sin(x)/2",
            criterion_2(&mut banach_traces),
        ),
        (3, "Kannan example, k = 1/8", criterion_3()),
        (4, "Edelstein example arctan(x) - x", criterion_4()),
        (
            5,
            "rate bound with perturbation sum",
            criterion_5(&mut banach_traces),
        ),
        (6, "level-indexed cover refinement", criterion_6()),
        (7, "discrete factor is a product identity", criterion_7()),
        (8, "product ball inclusion", criterion_8()),
        (9, "nested intervals meet in one point", criterion_9()),
        (10, "diameter of the closure", criterion_10()),
        (11, "negative controls", criterion_11()),
    ];
    let mut failed = 0;
    for (n, title, outcome) in results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {title} ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n}: {title} ({detail})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
