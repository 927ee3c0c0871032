use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use phimetric::axioms::{check_axioms, check_phi_continuity};
use phimetric::fixedpoint::{certify, iterate, solve};
use phimetric::point::{BoxDomain, Point};
use phimetric::report::{read_points_csv, to_canonical_json};
use phimetric::sequences::{is_bounded, is_cauchy, Trace};
use phimetric::space::PhiMetricSpace;
use phimetric::topology::{
    ball_members, diameter, epsilon_net, stone_refinement_with, verify_refinement, Ball, BallKind,
    Cover, CoverSet, PointCloud, StoneOptions,
};
use phimetric::Error;
use serde_json::json;

use crate::config::{build_map, ExperimentConfig};

/// Outcome of a command that ran to completion.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A check failed or an iteration did not converge.
    Failed,
}

pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub seed: u64,
    pub out: PathBuf,
    pub verbose: bool,
}

impl Ctx {
    fn write_json(&self, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
        let path = self.out.join(name);
        std::fs::write(&path, to_canonical_json(value)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
        if self.verbose {
            eprintln!("wrote {}", path.display());
        }
        Ok(path)
    }

    fn write_trace(&self, name: &str, trace: &Trace) -> Result<PathBuf> {
        let path = self.out.join(name);
        let file =
            File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        trace.write_csv(BufWriter::new(file))?;
        if self.verbose {
            eprintln!("wrote {}", path.display());
        }
        Ok(path)
    }

    fn space_on(&self, domain: &BoxDomain) -> Result<PhiMetricSpace> {
        Ok(self.cfg.space.build(domain)?)
    }

    fn configured_domain(&self) -> Result<Option<BoxDomain>> {
        self.cfg.domain.as_ref().map(|d| d.to_box()).transpose()
    }

    /// Space on the configured box, or on the bounding box of `points`.
    fn space_for_cloud(&self, points: &[Point]) -> Result<PhiMetricSpace> {
        let domain = match self.configured_domain()? {
            Some(d) => d,
            None => bounding_box(points)?,
        };
        self.space_on(&domain)
    }

    fn load_cloud(&self, path: &Path) -> Result<PointCloud> {
        let path = self.cfg.resolve(path);
        let file =
            File::open(&path).with_context(|| format!("cannot open cloud {}", path.display()))?;
        let points = read_points_csv(file)?;
        let space = self.space_for_cloud(&points)?;
        Ok(PointCloud::new(&space, points)?)
    }
}

fn bounding_box(points: &[Point]) -> Result<BoxDomain> {
    let Some(first) = points.first() else {
        bail!("the cloud is empty");
    };
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for p in points {
        if p.dim() != lo.len() {
            bail!("cloud rows have different lengths");
        }
        for (k, c) in p.coords().iter().enumerate() {
            lo[k] = lo[k].min(*c);
            hi[k] = hi[k].max(*c);
        }
    }
    Ok(BoxDomain::new(lo, hi)?)
}

pub fn check(ctx: &Ctx) -> Result<Status> {
    let section = ctx.cfg.section("check", &ctx.cfg.check)?;
    let domain = ctx
        .configured_domain()?
        .context("check needs a [domain] box")?;
    let space = ctx.space_on(&domain)?;
    let sampler = ctx.cfg.sampler.sampler(ctx.seed);
    let axioms = check_axioms(&space, &sampler, section.tol)?;
    let continuity = match check_phi_continuity(&space, &sampler, &section.eps) {
        Ok(r) => Ok(r),
        Err(e @ Error::ModulusNotFound { .. }) => Err(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let pass = axioms.all_pass() && continuity.as_ref().is_ok_and(|c| c.all_pass());
    let report = json!({
        "space": space.label(),
        "domain": space.domain(),
        "seed": ctx.seed,
        "pass": pass,
        "axioms": axioms,
        "continuity": match &continuity {
            Ok(r) => json!(r),
            Err(msg) => json!({ "error": msg }),
        },
    });
    ctx.write_json("check_report.json", &report)?;
    println!(
        "{}: {}",
        space.label(),
        if pass { "all axioms pass" } else { "FAIL" }
    );
    if !pass {
        for id in axioms.failed() {
            if let Some(w) = axioms.witnesses_for(id).next() {
                let pts: Vec<String> = w.points.iter().map(|p| p.to_string()).collect();
                println!(
                    "  {} witness at {}: {} > {}",
                    json!(id),
                    pts.join(", "),
                    w.lhs,
                    w.rhs
                );
            }
        }
        match &continuity {
            Ok(c) if !c.all_pass() => println!("  phi continuity: {} witnesses", c.witnesses.len()),
            Err(msg) => println!("  phi continuity: {msg}"),
            _ => {}
        }
    }
    Ok(if pass {
        Status::Success
    } else {
        Status::Failed
    })
}

pub fn solve_cmd(ctx: &Ctx) -> Result<Status> {
    let section = ctx.cfg.section("solve", &ctx.cfg.solve)?;
    let map = build_map(&section.map, &section.affine)?;
    let kind = section
        .kind
        .or(map.intended())
        .context("map has no intended contraction kind; set `kind`")?;
    let domain = match ctx.configured_domain()? {
        Some(d) => d,
        None => map.domain().clone(),
    };
    let space = ctx.space_on(&domain)?;
    let x0 = Point::new(section.x0.clone())?;
    // a failed certification is reported, the iteration still runs
    let (cert, cert_error) = if section.certify {
        match certify(&space, &map, &ctx.cfg.sampler.sampler(ctx.seed), kind) {
            Ok(c) => (Some(c), None),
            Err(e @ (Error::Precondition(_) | Error::DegenerateMap)) => (None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        }
    } else {
        (None, None)
    };
    match solve(kind, &space, &map, &x0, section.tol, section.max_iter) {
        Ok(mut result) => {
            if let Some(c) = &cert {
                result = result.with_certificate(c);
            }
            let trace_path = ctx.write_trace("solve_trace.csv", &result.trace)?;
            let trace_ref = trace_path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned());
            let report = json!({
                "status": "converged",
                "map": map.label(),
                "space": space.label(),
                "result": result.report(trace_ref),
                "certificate": cert,
                "certificate_error": cert_error,
            });
            ctx.write_json("solve_result.json", &report)?;
            println!(
                "{} ({kind}): fixed point {} after {} iterations, residual {:e}",
                map.label(),
                result.point,
                result.iterations,
                result.residual
            );
            Ok(Status::Success)
        }
        Err(Error::Solve(failure)) => {
            ctx.write_trace("solve_trace.csv", &failure.trace)?;
            let report = json!({
                "status": "failed",
                "map": map.label(),
                "space": space.label(),
                "kind": failure.kind,
                "iterations": failure.iterations,
                "failure": failure.reason,
                "message": failure.to_string(),
                "last": failure.trace.last(),
                "trace_ref": "solve_trace.csv",
                "certificate": cert,
                "certificate_error": cert_error,
            });
            ctx.write_json("solve_result.json", &report)?;
            println!("{}: {failure}", map.label());
            Ok(Status::Failed)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn refine(ctx: &Ctx) -> Result<Status> {
    let section = ctx.cfg.section("refine", &ctx.cfg.refine)?;
    let cloud = ctx.load_cloud(&section.cloud)?;
    let mut sets = Vec::with_capacity(section.cover.len());
    for c in &section.cover {
        let indices = match (&c.center, c.radius, &c.indices) {
            (Some(center), Some(radius), None) => {
                let ball = Ball::new(
                    Point::new(center.clone())?,
                    radius,
                    c.kind.unwrap_or(BallKind::Open),
                )?;
                ball_members(&cloud, &ball)?
            }
            (None, None, Some(idx)) => idx.clone(),
            _ => bail!(
                "cover set `{}` needs either center and radius, or indices",
                c.id
            ),
        };
        sets.push(CoverSet {
            id: c.id.clone(),
            indices,
        });
    }
    let cover = Cover::new(cloud.len(), sets)?;
    let opts = StoneOptions {
        i_max: section.i_max,
        exclusion: section.exclusion,
        candidate_radius: section.candidate_radius,
    };
    match stone_refinement_with(&cloud, &cover, &opts) {
        Ok(family) => {
            let report = verify_refinement(&cloud, &cover, &family)?;
            let pass = report.all_pass();
            ctx.write_json(
                "refinement.json",
                &json!({
                    "space": cloud.space().label(),
                    "points": cloud.len(),
                    "cover": cover,
                    "family": family,
                    "verification": report,
                }),
            )?;
            println!(
                "{} members over {} levels (i_max {}), verification {}",
                family.members.len(),
                family.levels_used,
                family.i_max,
                if pass { "passes" } else { "FAILS" }
            );
            Ok(if pass {
                Status::Success
            } else {
                Status::Failed
            })
        }
        Err(Error::NonTermination { levels, uncovered }) => {
            ctx.write_json(
                "refinement.json",
                &json!({
                    "space": cloud.space().label(),
                    "points": cloud.len(),
                    "cover": cover,
                    "error": "non-termination",
                    "levels": levels,
                    "uncovered": uncovered,
                }),
            )?;
            println!("refinement did not cover the cloud in {levels} levels; uncovered indices {uncovered:?}");
            Ok(Status::Failed)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cover(ctx: &Ctx) -> Result<Status> {
    let section = ctx.cfg.section("cover", &ctx.cfg.cover)?;
    let cloud = ctx.load_cloud(&section.cloud)?;
    let net = epsilon_net(&cloud, section.eps)?;
    let mut sets = Vec::with_capacity(net.len());
    for &c in &net {
        let ball = Ball::open(cloud.point(c).clone(), section.eps)?;
        sets.push(CoverSet {
            id: format!("B{c}"),
            indices: ball_members(&cloud, &ball)?,
        });
    }
    let cover = Cover::new(cloud.len(), sets)?;
    let all: Vec<usize> = (0..cloud.len()).collect();
    ctx.write_json(
        "cover.json",
        &json!({
            "space": cloud.space().label(),
            "points": cloud.len(),
            "eps": section.eps,
            "diameter": diameter(&cloud, &all)?,
            "centers": net,
            "center_points": net.iter().map(|&c| cloud.point(c)).collect::<Vec<_>>(),
            "cover": cover,
        }),
    )?;
    println!(
        "{} centers cover {} points at eps {}",
        net.len(),
        cloud.len(),
        section.eps
    );
    Ok(Status::Success)
}

pub fn trace(ctx: &Ctx) -> Result<Status> {
    let section = ctx.cfg.section("trace", &ctx.cfg.trace)?;
    let map = build_map(&section.map, &section.affine)?;
    let domain = match ctx.configured_domain()? {
        Some(d) => d,
        None => map.domain().clone(),
    };
    let space = ctx.space_on(&domain)?;
    let x0 = Point::new(section.x0.clone())?;
    let trace = match iterate(&space, &map, &x0, section.steps) {
        Ok(t) => t,
        Err(Error::Solve(failure)) => {
            ctx.write_trace("trace.csv", &failure.trace)?;
            println!("{}: {}", map.label(), failure.reason);
            return Ok(Status::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    ctx.write_trace("trace.csv", &trace)?;
    let cauchy = if trace.len() >= 2 {
        Some(is_cauchy(&trace, section.tol)?)
    } else {
        None
    };
    let bound = is_bounded(&trace)?;
    let consistent = cauchy.is_some_and(|c| c.consistent);
    ctx.write_json(
        "trace_report.json",
        &json!({
            "map": map.label(),
            "space": space.label(),
            "kind": map.intended(),
            "steps": section.steps,
            "tol": section.tol,
            "cauchy": cauchy,
            "bounded": bound,
            "last": trace.last(),
            "trace_ref": "trace.csv",
        }),
    )?;
    println!(
        "{}: {} points, Cauchy at tol {:e}: {}",
        map.label(),
        trace.len(),
        section.tol,
        if consistent {
            "consistent"
        } else {
            "not consistent"
        }
    );
    Ok(if consistent {
        Status::Success
    } else {
        Status::Failed
    })
}
