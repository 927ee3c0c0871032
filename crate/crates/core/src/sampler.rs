//! Seeded point samplers.
//!
//! Every stream is driven by a `ChaCha8Rng` seeded from the sampler's 64-bit
//! seed, so the same sampler reproduces the same points bit for bit on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{BoxDomain, Domain, Point};

/// Gaussian draws falling outside the box are redrawn at most this often.
const MAX_REJECTIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    /// Uniform in `bounds`, or in the target domain when `bounds` is `None`.
    Uniform { bounds: Option<BoxDomain> },
    /// Isotropic normal around `anchor`, restricted to the target domain.
    Gaussian { anchor: Point, sigma: f64 },
    /// Replays the given points in order, cycling.
    Corpus { points: Vec<Point> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub seed: u64,
    pub strategy: Strategy,
    pub count: usize,
}

impl Sampler {
    pub fn uniform(seed: u64, count: usize) -> Self {
        Sampler {
            seed,
            strategy: Strategy::Uniform { bounds: None },
            count,
        }
    }

    pub fn uniform_in(seed: u64, count: usize, bounds: BoxDomain) -> Self {
        Sampler {
            seed,
            strategy: Strategy::Uniform {
                bounds: Some(bounds),
            },
            count,
        }
    }

    pub fn gaussian(seed: u64, count: usize, anchor: Point, sigma: f64) -> Self {
        Sampler {
            seed,
            strategy: Strategy::Gaussian { anchor, sigma },
            count,
        }
    }

    pub fn corpus(seed: u64, points: Vec<Point>) -> Self {
        let count = points.len();
        Sampler {
            seed,
            strategy: Strategy::Corpus { points },
            count,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    /// Opens a point stream for a space of dimension `dim` on `domain`.
    pub fn stream(&self, dim: usize, domain: &Domain) -> Result<PointStream> {
        if self.count == 0 {
            return Err(Error::input("sampler count must be at least 1"));
        }
        let source = match &self.strategy {
            Strategy::Uniform { bounds } => {
                let b = match (bounds, domain) {
                    (Some(b), _) => b.clone(),
                    (None, Domain::Box(b)) => b.clone(),
                    (None, Domain::Unbounded) => {
                        return Err(Error::config(
                            "uniform sampling on an unbounded domain needs an explicit box",
                        ))
                    }
                };
                if b.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: b.dim(),
                    });
                }
                Source::Uniform(b)
            }
            Strategy::Gaussian { anchor, sigma } => {
                anchor.ensure_dim(dim)?;
                let normal = Normal::new(0.0, *sigma)
                    .map_err(|e| Error::config(format!("gaussian sigma {sigma}: {e}")))?;
                if !domain.contains(anchor) {
                    return Err(Error::config("gaussian anchor lies outside the domain"));
                }
                Source::Gaussian {
                    anchor: anchor.clone(),
                    normal,
                    domain: domain.clone(),
                }
            }
            Strategy::Corpus { points } => {
                if points.is_empty() {
                    return Err(Error::input("corpus sampler has no points"));
                }
                for p in points {
                    p.ensure_dim(dim)?;
                }
                Source::Corpus {
                    points: points.clone(),
                    next: 0,
                }
            }
        };
        Ok(PointStream {
            rng: ChaCha8Rng::seed_from_u64(self.seed),
            source,
        })
    }
}

enum Source {
    Uniform(BoxDomain),
    Gaussian {
        anchor: Point,
        normal: Normal<f64>,
        domain: Domain,
    },
    Corpus {
        points: Vec<Point>,
        next: usize,
    },
}

/// An endless deterministic point stream; also hands out auxiliary uniforms
/// from the same generator so derived constructions stay reproducible.
pub struct PointStream {
    rng: ChaCha8Rng,
    source: Source,
}

impl PointStream {
    pub fn next_point(&mut self) -> Result<Point> {
        match &mut self.source {
            Source::Uniform(b) => {
                let coords = b
                    .lo()
                    .iter()
                    .zip(b.hi())
                    .map(|(lo, hi)| {
                        if lo == hi {
                            *lo
                        } else {
                            self.rng.random_range(*lo..=*hi)
                        }
                    })
                    .collect();
                Point::new(coords)
            }
            Source::Gaussian {
                anchor,
                normal,
                domain,
            } => {
                for _ in 0..MAX_REJECTIONS {
                    let coords: Vec<f64> = anchor
                        .coords()
                        .iter()
                        .map(|a| a + normal.sample(&mut self.rng))
                        .collect();
                    let p = Point::new(coords)?;
                    if domain.contains(&p) {
                        return Ok(p);
                    }
                }
                Err(Error::config(
                    "gaussian sampler keeps leaving the domain; reduce sigma",
                ))
            }
            Source::Corpus { points, next } => {
                let p = points[*next % points.len()].clone();
                *next += 1;
                Ok(p)
            }
        }
    }

    pub fn points(&mut self, n: usize) -> Result<Vec<Point>> {
        (0..n).map(|_| self.next_point()).collect()
    }

    /// Uniform in `(0, 1]`.
    pub fn unit(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.random_range(0..n)
    }
}
