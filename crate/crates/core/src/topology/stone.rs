//! Level-indexed refinement of an open cover into σ-discrete families.
//!
//! At level `i = 1, 2, …` and for each cover set `U_s` in list order, a point
//! `c` is a candidate when
//!
//! 1. `U_s` is the first cover set containing `c`,
//! 2. `c` lies in no member of an earlier level,
//! 3. the cloud part of `B(c, F/2^i)` lies inside `U_s`,
//!
//! and the member `V_{s,i}` is the union of the open balls `B(c, 1/2^i)`
//! over the candidates. `F = 5` for metrics. For `d = m^q` the factor grows
//! to `(2 + max(2^{1/q}, 2^{1−1/q}))^q` (11.66 for squares), the smallest
//! value for which the separation bound `1/2^{i−1}` between members of one
//! level survives the relaxed triangle inequality of `d`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BallKind, Cover, PointCloud};
use crate::axioms::Verdict;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::PhiMetricSpace;

pub const LITERAL_RADIUS_FACTOR: f64 = 5.0;

/// Which earlier members exclude a point from candidacy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    /// Members of strictly earlier levels.
    #[default]
    EarlierLevels,
    /// Also members already built at the current level for earlier sets.
    EarlierLevelsAndSiblings,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateRadius {
    /// Derived from the space's root exponent; `5` when it is unknown.
    #[default]
    Auto,
    /// Always `5`.
    Literal,
    Factor(f64),
}

/// Candidate radius factor `F` for a space.
pub fn radius_factor(space: &PhiMetricSpace, radius: CandidateRadius) -> f64 {
    match radius {
        CandidateRadius::Literal => LITERAL_RADIUS_FACTOR,
        CandidateRadius::Factor(f) => f,
        CandidateRadius::Auto => match space.shape().root_exponent {
            Some(q) if q > 0.0 => {
                let spread = 2f64.powf(1.0 / q).max(2f64.powf(1.0 - 1.0 / q));
                (2.0 + spread).powf(q).max(LITERAL_RADIUS_FACTOR)
            }
            _ => LITERAL_RADIUS_FACTOR,
        },
    }
}

/// `⌈log₂(F/d_min)⌉ + 2`: from that level on every point is its own candidate.
pub fn default_i_max(cloud: &PointCloud, factor: f64) -> u32 {
    match cloud.min_positive_distance() {
        Some(d) => ((factor / d).log2().ceil().max(0.0) as u32 + 2).max(1),
        None => 1,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StoneOptions {
    /// Defaults to [`default_i_max`].
    pub i_max: Option<u32>,
    pub exclusion: Exclusion,
    pub candidate_radius: CandidateRadius,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementMember {
    pub s: String,
    pub i: u32,
    pub centers: Vec<Point>,
    pub center_indices: Vec<usize>,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementFamily {
    pub members: Vec<RefinementMember>,
    pub i_max: u32,
    pub levels_used: u32,
    pub radius_factor: f64,
    pub exclusion: Exclusion,
}

/// [`stone_refinement_with`] under default options.
pub fn stone_refinement(cloud: &PointCloud, cover: &Cover) -> Result<RefinementFamily> {
    stone_refinement_with(cloud, cover, &StoneOptions::default())
}

/// Builds the families `V_{s,i}` level by level until the cloud is covered.
///
/// Fails with [`Error::NonTermination`] listing the uncovered indices when
/// `i_max` levels do not suffice.
pub fn stone_refinement_with(
    cloud: &PointCloud,
    cover: &Cover,
    opts: &StoneOptions,
) -> Result<RefinementFamily> {
    let cover = Cover::new(cloud.len(), cover.sets().to_vec())?;
    let factor = radius_factor(cloud.space(), opts.candidate_radius);
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::config(format!(
            "invalid candidate radius factor {factor}"
        )));
    }
    let i_max = opts.i_max.unwrap_or_else(|| default_i_max(cloud, factor));
    let n = cloud.len();
    let first: Vec<usize> = (0..n)
        .map(|p| cover.first_containing(p).expect("validated cover"))
        .collect();

    let mut covered = vec![false; n];
    let mut members = Vec::new();
    let mut levels_used = 0;
    for i in 1..=i_max {
        if covered.iter().all(|c| *c) {
            break;
        }
        levels_used = i;
        let scale = 0.5f64.powi(i as i32);
        let mut level: Vec<RefinementMember> = Vec::new();
        let mut taken = vec![false; n];
        for (s, set) in cover.sets().iter().enumerate() {
            let excluded = |c: usize| {
                covered[c] || (opts.exclusion == Exclusion::EarlierLevelsAndSiblings && taken[c])
            };
            let candidates: Vec<usize> = (0..n)
                .into_par_iter()
                .filter(|&c| {
                    first[c] == s
                        && !excluded(c)
                        && cloud
                            .ball_around(c, factor * scale, BallKind::Open)
                            .iter()
                            .all(|&y| cover.contains(s, y))
                })
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let mut inside = vec![false; n];
            for &c in &candidates {
                for y in cloud.ball_around(c, scale, BallKind::Open) {
                    inside[y] = true;
                }
            }
            let indices: Vec<usize> = (0..n).filter(|&y| inside[y]).collect();
            for &y in &indices {
                taken[y] = true;
            }
            level.push(RefinementMember {
                s: set.id.clone(),
                i,
                centers: candidates.iter().map(|&c| cloud.point(c).clone()).collect(),
                center_indices: candidates,
                indices,
            });
        }
        for m in &level {
            for &y in &m.indices {
                covered[y] = true;
            }
        }
        members.extend(level);
    }

    let uncovered: Vec<usize> = (0..n).filter(|&p| !covered[p]).collect();
    if !uncovered.is_empty() {
        return Err(Error::NonTermination {
            levels: i_max,
            uncovered,
        });
    }
    Ok(RefinementFamily {
        members,
        i_max,
        levels_used,
        radius_factor: factor,
        exclusion: opts.exclusion,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefinementCheck {
    /// Each member lies inside its cover set.
    Refinement,
    /// The members cover the cloud.
    Covering,
    /// Every ball `B(x, 1/2^{i+1})` meets at most one member of level `i`.
    Discreteness,
    /// Members of one level with distinct sets are `≥ 1/2^{i−1}` apart.
    Separation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum RefinementViolation {
    /// `point` is `None` when the member names an unknown cover set.
    Refinement {
        member: usize,
        s: String,
        point: Option<usize>,
    },
    Covering {
        point: usize,
    },
    Discreteness {
        point: usize,
        level: u32,
        radius: f64,
        members: Vec<usize>,
    },
    Separation {
        level: u32,
        members: [usize; 2],
        points: [usize; 2],
        distance: f64,
        required: f64,
    },
}

impl RefinementViolation {
    pub fn check(&self) -> RefinementCheck {
        match self {
            RefinementViolation::Refinement { .. } => RefinementCheck::Refinement,
            RefinementViolation::Covering { .. } => RefinementCheck::Covering,
            RefinementViolation::Discreteness { .. } => RefinementCheck::Discreteness,
            RefinementViolation::Separation { .. } => RefinementCheck::Separation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub verdicts: BTreeMap<RefinementCheck, Verdict>,
    pub violations: Vec<RefinementViolation>,
}

impl RefinementReport {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn passes(&self, check: RefinementCheck) -> bool {
        self.verdicts.get(&check) == Some(&Verdict::NoViolationFound)
    }
}

/// Checks a family against its cloud and cover: refinement, covering,
/// level-discreteness and same-level separation.
pub fn verify_refinement(
    cloud: &PointCloud,
    cover: &Cover,
    fam: &RefinementFamily,
) -> Result<RefinementReport> {
    let n = cloud.len();
    for m in &fam.members {
        cloud.check_indices(&m.indices)?;
    }
    let mut violations = Vec::new();

    for (k, m) in fam.members.iter().enumerate() {
        match cover.position(&m.s) {
            None => violations.push(RefinementViolation::Refinement {
                member: k,
                s: m.s.clone(),
                point: None,
            }),
            Some(s) => {
                for &p in m.indices.iter().filter(|&&p| !cover.contains(s, p)) {
                    violations.push(RefinementViolation::Refinement {
                        member: k,
                        s: m.s.clone(),
                        point: Some(p),
                    });
                }
            }
        }
    }

    let mut seen = vec![false; n];
    for m in &fam.members {
        for &p in &m.indices {
            seen[p] = true;
        }
    }
    violations.extend(
        (0..n)
            .filter(|&p| !seen[p])
            .map(|point| RefinementViolation::Covering { point }),
    );

    let mut by_level: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (k, m) in fam.members.iter().enumerate() {
        by_level.entry(m.i).or_default().push(k);
    }
    for (&level, ks) in &by_level {
        let radius = 0.5f64.powi(level as i32 + 1);
        let found: Vec<RefinementViolation> = (0..n)
            .into_par_iter()
            .filter_map(|x| {
                let met: Vec<usize> = ks
                    .iter()
                    .copied()
                    .filter(|&k| {
                        fam.members[k]
                            .indices
                            .iter()
                            .any(|&p| cloud.dist(x, p) < radius)
                    })
                    .collect();
                (met.len() > 1).then_some(RefinementViolation::Discreteness {
                    point: x,
                    level,
                    radius,
                    members: met,
                })
            })
            .collect();
        violations.extend(found);

        let required = 0.5f64.powi(level as i32 - 1);
        for (a_pos, &a) in ks.iter().enumerate() {
            for &b in &ks[a_pos + 1..] {
                let (ma, mb) = (&fam.members[a], &fam.members[b]);
                if ma.s == mb.s {
                    continue;
                }
                let closest = ma
                    .indices
                    .iter()
                    .flat_map(|&p| mb.indices.iter().map(move |&q| (p, q)))
                    .min_by(|x, y| cloud.dist(x.0, x.1).total_cmp(&cloud.dist(y.0, y.1)));
                if let Some((p, q)) = closest {
                    let distance = cloud.dist(p, q);
                    if distance < required {
                        violations.push(RefinementViolation::Separation {
                            level,
                            members: [a, b],
                            points: [p, q],
                            distance,
                            required,
                        });
                    }
                }
            }
        }
    }

    let verdicts = [
        RefinementCheck::Refinement,
        RefinementCheck::Covering,
        RefinementCheck::Discreteness,
        RefinementCheck::Separation,
    ]
    .into_iter()
    .map(|c| {
        let v = if violations.iter().any(|v| v.check() == c) {
            Verdict::Fail
        } else {
            Verdict::NoViolationFound
        };
        (c, v)
    })
    .collect();
    Ok(RefinementReport {
        verdicts,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{from_metric, squared_euclidean, Metric};
    use crate::point::BoxDomain;
    use crate::topology::CoverSet;

    fn sq_cloud(xs: &[f64]) -> PointCloud {
        let s = squared_euclidean(BoxDomain::cube(1, -20.0, 20.0).unwrap());
        PointCloud::new(&s, xs.iter().map(|&x| Point::scalar(x)).collect()).unwrap()
    }

    fn cover(sets: &[(&str, &[usize])], n: usize) -> Cover {
        Cover::new(
            n,
            sets.iter()
                .map(|(id, idx)| CoverSet {
                    id: (*id).into(),
                    indices: idx.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn factor_by_root_exponent() {
        let sq = squared_euclidean(BoxDomain::cube(1, 0.0, 1.0).unwrap());
        let f = radius_factor(&sq, CandidateRadius::Auto);
        assert!((f - (2.0 + 2f64.sqrt()).powi(2)).abs() < 1e-12);
        assert_eq!(radius_factor(&sq, CandidateRadius::Literal), 5.0);
        let m = from_metric(&Metric::euclidean(), 1);
        assert_eq!(radius_factor(&m, CandidateRadius::Auto), 5.0);
    }

    #[test]
    fn two_point_cloud_gives_singletons() {
        let c = sq_cloud(&[0.0, 10.0]);
        let cov = cover(&[("a", &[0]), ("b", &[1])], 2);
        let fam = stone_refinement_with(
            &c,
            &cov,
            &StoneOptions {
                candidate_radius: CandidateRadius::Literal,
                ..Default::default()
            },
        )
        .unwrap();
        // 5/2^i < 100 already at i = 1
        assert_eq!(fam.levels_used, 1);
        let idx: Vec<_> = fam
            .members
            .iter()
            .map(|m| (m.s.as_str(), m.indices.clone()))
            .collect();
        assert_eq!(idx, vec![("a", vec![0]), ("b", vec![1])]);
        assert!(verify_refinement(&c, &cov, &fam).unwrap().all_pass());
    }

    #[test]
    fn whole_cloud_cover() {
        let c = sq_cloud(&[0.0, 0.3, 0.35, 2.0]);
        let cov = cover(&[("u", &[0, 1, 2, 3])], 4);
        let fam = stone_refinement(&c, &cov).unwrap();
        assert!(fam.members.iter().all(|m| m.s == "u"));
        assert!(verify_refinement(&c, &cov, &fam).unwrap().all_pass());
    }

    #[test]
    fn tight_i_max_reports_uncovered() {
        let c = sq_cloud(&[0.0, 0.01]);
        let cov = cover(&[("a", &[0]), ("b", &[1])], 2);
        let opts = StoneOptions {
            i_max: Some(2),
            ..Default::default()
        };
        match stone_refinement_with(&c, &cov, &opts) {
            Err(Error::NonTermination { levels, uncovered }) => {
                assert_eq!(levels, 2);
                assert_eq!(uncovered, vec![0, 1]);
            }
            other => panic!("expected non-termination, got {other:?}"),
        }
    }

    #[test]
    fn single_point_is_vacuous() {
        let c = sq_cloud(&[1.0]);
        let cov = cover(&[("a", &[0])], 1);
        let fam = stone_refinement(&c, &cov).unwrap();
        assert_eq!(fam.i_max, 1);
        assert!(verify_refinement(&c, &cov, &fam).unwrap().all_pass());
    }

    #[test]
    fn members_forced_onto_one_level_fail_discreteness() {
        let c = sq_cloud(&[0.0, 0.1]);
        let cov = cover(&[("a", &[0]), ("b", &[1])], 2);
        let mut fam = stone_refinement(&c, &cov).unwrap();
        assert!(verify_refinement(&c, &cov, &fam).unwrap().all_pass());
        for m in &mut fam.members {
            m.i = 1;
        }
        let r = verify_refinement(&c, &cov, &fam).unwrap();
        assert!(!r.passes(RefinementCheck::Discreteness));
        assert!(r.passes(RefinementCheck::Refinement));
    }

    #[test]
    fn foreign_member_fails_refinement() {
        let c = sq_cloud(&[0.0, 5.0]);
        let cov = cover(&[("a", &[0]), ("b", &[1])], 2);
        let mut fam = stone_refinement(&c, &cov).unwrap();
        fam.members[0].indices.push(1);
        let r = verify_refinement(&c, &cov, &fam).unwrap();
        assert!(!r.passes(RefinementCheck::Refinement));
        fam.members[0].s = "nope".into();
        assert!(!verify_refinement(&c, &cov, &fam)
            .unwrap()
            .passes(RefinementCheck::Refinement));
    }
}
