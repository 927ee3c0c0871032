//! Experiment configuration files (TOML), one experiment per file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use phimetric::constructions::Recipe;
use phimetric::fixedpoint::{ContractionKind, SelfMap};
use phimetric::point::BoxDomain;
use phimetric::sampler::{Sampler, Strategy};
use phimetric::topology::{BallKind, CandidateRadius, Exclusion};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub space: Recipe,
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub sampler: SamplerConfig,
    pub check: Option<CheckConfig>,
    pub solve: Option<SolveConfig>,
    pub refine: Option<RefineConfig>,
    pub cover: Option<CoverConfig>,
    pub trace: Option<TraceConfig>,
    /// Directory of the config file; relative paths are resolved against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainConfig {
    pub fn to_box(&self) -> Result<BoxDomain> {
        Ok(BoxDomain::new(self.lo.clone(), self.hi.clone())?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    #[serde(default = "default_count")]
    pub count: usize,
    pub strategy: Option<Strategy>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            count: default_count(),
            strategy: None,
        }
    }
}

fn default_count() -> usize {
    10_000
}

impl SamplerConfig {
    pub fn sampler(&self, seed: u64) -> Sampler {
        Sampler {
            seed,
            strategy: self
                .strategy
                .clone()
                .unwrap_or(Strategy::Uniform { bounds: None }),
            count: self.count,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    #[serde(default = "default_check_tol")]
    pub tol: f64,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
}

fn default_check_tol() -> f64 {
    phimetric::axioms::DEFAULT_TOLERANCE
}

fn default_eps() -> Vec<f64> {
    vec![1.0, 0.1, 0.01]
}

/// Built-in map ids plus `affine`.
#[derive(Clone, Debug, Deserialize)]
#[serde(try_from = "String")]
pub struct MapId(String);

impl TryFrom<String> for MapId {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        if s == "affine" || SelfMap::BUILTIN_IDS.contains(&s.as_str()) {
            Ok(MapId(s))
        } else {
            Err(format!(
                "unknown map `{s}`, expected one of: {}, affine",
                SelfMap::BUILTIN_IDS.join(", ")
            ))
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineConfig {
    pub a: f64,
    pub b: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

pub fn build_map(map: &MapId, affine: &Option<AffineConfig>) -> Result<SelfMap> {
    match (map.0.as_str(), affine) {
        ("affine", Some(a)) => Ok(SelfMap::affine(
            a.a,
            a.b,
            BoxDomain::new(a.lo.clone(), a.hi.clone())?,
        )),
        ("affine", None) => bail!("map `affine` needs an affine table with a, b, lo, hi"),
        (_, Some(_)) => bail!("an affine table is only valid with map = \"affine\""),
        (id, None) => Ok(SelfMap::builtin(id).expect("validated id")),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub map: MapId,
    pub affine: Option<AffineConfig>,
    /// Defaults to the map's intended kind.
    pub kind: Option<ContractionKind>,
    pub x0: Vec<f64>,
    #[serde(default = "default_solver_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Attach a sampled certificate to the result.
    #[serde(default = "default_true")]
    pub certify: bool,
}

fn default_solver_tol() -> f64 {
    phimetric::fixedpoint::DEFAULT_SOLVER_TOL
}

fn default_max_iter() -> usize {
    phimetric::fixedpoint::DEFAULT_MAX_ITER
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSetConfig {
    pub id: String,
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub kind: Option<BallKind>,
    pub indices: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefineConfig {
    pub cloud: PathBuf,
    pub cover: Vec<CoverSetConfig>,
    pub i_max: Option<u32>,
    #[serde(default)]
    pub exclusion: Exclusion,
    #[serde(default)]
    pub candidate_radius: CandidateRadius,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    pub cloud: PathBuf,
    pub eps: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    pub map: MapId,
    pub affine: Option<AffineConfig>,
    pub x0: Vec<f64>,
    pub steps: usize,
    #[serde(default = "default_trace_tol")]
    pub tol: f64,
}

fn default_trace_tol() -> f64 {
    1e-6
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn section<'a, T>(&self, name: &str, s: &'a Option<T>) -> Result<&'a T> {
        s.as_ref()
            .with_context(|| format!("config has no [{name}] section"))
    }
}
