use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::product;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::report::read_points_csv;
use crate::space::PhiMetricSpace;

/// A finite ordered set of distinct points of a space, with its full
/// distance matrix.
#[derive(Clone, Debug)]
pub struct PointCloud {
    space: PhiMetricSpace,
    points: Vec<Point>,
    dist: Vec<f64>,
}

impl PointCloud {
    /// Fails on dimension mismatch, points outside the space's domain, and
    /// distinct indices at distance zero.
    pub fn new(space: &PhiMetricSpace, points: Vec<Point>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            p.ensure_dim(space.dim())?;
            if !space.domain().contains(p) {
                return Err(Error::input(format!(
                    "point {i} {p} lies outside the domain"
                )));
            }
        }
        let n = points.len();
        let rows: Vec<Result<Vec<f64>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| space.distance(&points[i], &points[j]))
                    .collect()
            })
            .collect();
        let mut dist = Vec::with_capacity(n * n);
        for row in rows {
            dist.extend(row?);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i * n + j] == 0.0 {
                    return Err(Error::input(format!(
                        "points {i} and {j} are at distance zero ({})",
                        points[i]
                    )));
                }
            }
        }
        Ok(PointCloud {
            space: space.clone(),
            points,
            dist,
        })
    }

    pub fn from_csv<R: Read>(space: &PhiMetricSpace, reader: R) -> Result<Self> {
        PointCloud::new(space, read_points_csv(reader)?)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn space(&self) -> &PhiMetricSpace {
        &self.space
    }

    /// `d(pᵢ, pⱼ)` from the cached matrix.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    /// Smallest distance between distinct points; `None` below two points.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let n = self.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j))
            .min_by(f64::total_cmp)
    }

    pub(crate) fn check_indices(&self, subset: &[usize]) -> Result<()> {
        match subset.iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::input(format!(
                "index {i} out of range for a cloud of {} points",
                self.len()
            ))),
            None => Ok(()),
        }
    }

    /// Members of the ball of radius `r` around cloud point `c`.
    pub(crate) fn ball_around(&self, c: usize, r: f64, kind: BallKind) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| kind.admits(self.dist(c, j), r))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallKind {
    /// `d(c, y) < r`
    Open,
    /// `d(c, y) ≤ r`
    Closed,
}

impl BallKind {
    fn admits(self, d: f64, r: f64) -> bool {
        match self {
            BallKind::Open => d < r,
            BallKind::Closed => d <= r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
    pub kind: BallKind,
}

impl Ball {
    pub fn new(center: Point, radius: f64, kind: BallKind) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::input(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Ball {
            center,
            radius,
            kind,
        })
    }

    pub fn open(center: Point, radius: f64) -> Result<Self> {
        Ball::new(center, radius, BallKind::Open)
    }

    pub fn closed(center: Point, radius: f64) -> Result<Self> {
        Ball::new(center, radius, BallKind::Closed)
    }
}

/// Indices of the cloud points inside `ball`, in cloud order.
pub fn ball_members(cloud: &PointCloud, ball: &Ball) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, p) in cloud.points().iter().enumerate() {
        if ball
            .kind
            .admits(cloud.space().distance(&ball.center, p)?, ball.radius)
        {
            out.push(i);
        }
    }
    Ok(out)
}

/// Whether `B(a, r) ⊆ B(a, s)` (open balls) on the cloud.
pub fn ball_nesting_check(cloud: &PointCloud, a: &Point, r: f64, s: f64) -> Result<bool> {
    let inner = ball_members(cloud, &Ball::open(a.clone(), r)?)?;
    let outer = ball_members(cloud, &Ball::open(a.clone(), s)?)?;
    Ok(inner.iter().all(|i| outer.binary_search(i).is_ok()))
}

/// `sup d(x, y)` over the subset; `0` for a singleton.
pub fn diameter(cloud: &PointCloud, subset: &[usize]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::input("diameter of an empty subset"));
    }
    cloud.check_indices(subset)?;
    Ok(subset
        .iter()
        .flat_map(|&i| subset.iter().map(move |&j| (i, j)))
        .map(|(i, j)| cloud.dist(i, j))
        .fold(0.0, f64::max))
}

/// Greedy farthest-point ε-net: starts at point 0 and repeatedly adds the
/// point farthest from the chosen centers (lowest index on ties) until every
/// point lies in an open `eps`-ball around a center. Centers are returned in
/// selection order.
pub fn epsilon_net(cloud: &PointCloud, eps: f64) -> Result<Vec<usize>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::input(format!("eps must be positive, got {eps}")));
    }
    if cloud.is_empty() {
        return Ok(Vec::new());
    }
    let mut centers = vec![0];
    let mut gap: Vec<f64> = (0..cloud.len()).map(|j| cloud.dist(0, j)).collect();
    loop {
        let (far, &g) = gap
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if g < eps {
            return Ok(centers);
        }
        centers.push(far);
        for (j, gj) in gap.iter_mut().enumerate() {
            *gj = gj.min(cloud.dist(far, j));
        }
    }
}

/// Whether `B₁(x, r) ∩ B₂(x, r) ⊆ B(x, r²)` on the given points, where `B`
/// is the ball of the product space `d₁·d₂`.
pub fn product_ball_inclusion_check(
    space1: &PhiMetricSpace,
    space2: &PhiMetricSpace,
    x: &Point,
    r: f64,
    cloud: &[Point],
) -> Result<bool> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::input(format!("radius must be positive, got {r}")));
    }
    let prod = product(&[space1.clone(), space2.clone()])?;
    for p in cloud {
        let inside = space1.distance(x, p)? < r && space2.distance(x, p)? < r;
        if inside && prod.distance(x, p)? >= r * r {
            return Ok(false);
        }
    }
    Ok(true)
}
