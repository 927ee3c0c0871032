//! Points and axis-aligned domains.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of ℝⁿ with finite coordinates.
///
/// The coordinate vector is validated on construction, so every `Point` in
/// circulation has `n ≥ 1` and no NaN or infinite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::input("a point needs at least one coordinate"));
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Point(coords))
    }

    /// One-dimensional point. Panics on a non-finite value.
    pub fn scalar(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite scalar point {x}");
        Point(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// First coordinate; convenient for scalar spaces.
    pub fn x(&self) -> f64 {
        self.0[0]
    }

    /// `self + t·(other − self)`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    pub(crate) fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }

    /// Lexicographic total order on coordinates, used to sort witnesses.
    pub fn total_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Closed axis-aligned box `[lo₁, hi₁] × … × [loₙ, hiₙ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::input(format!(
                "box bounds must be non-empty and of equal length (got {} and {})",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (a, b)) in lo.iter().zip(&hi).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if a > b {
                return Err(Error::input(format!("box side {i} is empty: {a} > {b}")));
            }
        }
        Ok(BoxDomain { lo, hi })
    }

    /// The cube `[lo, hi]ⁿ`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        BoxDomain::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn lo_corner(&self) -> Point {
        Point(self.lo.clone())
    }

    pub fn hi_corner(&self) -> Point {
        Point(self.hi.clone())
    }

    pub fn center(&self) -> Point {
        Point(
            self.lo
                .iter()
                .zip(&self.hi)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (a, b))| *a <= *c && *c <= *b)
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &BoxDomain) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    pub fn intersect(&self, other: &BoxDomain) -> Option<BoxDomain> {
        if self.dim() != other.dim() {
            return None;
        }
        let lo: Vec<f64> = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.max(*b))
            .collect();
        let hi: Vec<f64> = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| a.min(*b))
            .collect();
        BoxDomain::new(lo, hi).ok()
    }

    /// All `2ⁿ` corners in binary order (bit `i` set selects `hi[i]`).
    pub fn corners(&self) -> Vec<Point> {
        let n = self.dim();
        (0..1usize << n)
            .map(|mask| {
                Point(
                    (0..n)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                self.hi[i]
                            } else {
                                self.lo[i]
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Where a space's points live.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Box(BoxDomain),
    Unbounded,
}

impl Domain {
    pub fn as_box(&self) -> Option<&BoxDomain> {
        match self {
            Domain::Box(b) => Some(b),
            Domain::Unbounded => None,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Domain::Box(b) => b.contains(p),
            Domain::Unbounded => true,
        }
    }

    pub(crate) fn intersect(&self, other: &Domain) -> Result<Domain> {
        match (self, other) {
            (Domain::Unbounded, d) | (d, Domain::Unbounded) => Ok(d.clone()),
            (Domain::Box(a), Domain::Box(b)) => a
                .intersect(b)
                .map(Domain::Box)
                .ok_or_else(|| Error::input("factor domains do not intersect")),
        }
    }
}
