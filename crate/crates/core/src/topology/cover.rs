use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{ball_members, Ball, PointCloud};
use crate::error::{Error, Result};

/// One open set of a cover, as a sorted index subset of the cloud.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSet {
    pub id: String,
    pub indices: Vec<usize>,
}

/// An ordered family of index subsets whose union is the whole cloud. The
/// list order is the well-ordering used by the refinement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    sets: Vec<CoverSet>,
}

impl Cover {
    /// Validates ids (unique), indices (in range) and the covering property
    /// for a cloud of `cloud_len` points. Indices are sorted and deduplicated.
    pub fn new(cloud_len: usize, sets: Vec<CoverSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::input("a cover needs at least one set"));
        }
        let mut ids = BTreeSet::new();
        let mut seen = vec![false; cloud_len];
        let mut clean = Vec::with_capacity(sets.len());
        for set in sets {
            if !ids.insert(set.id.clone()) {
                return Err(Error::input(format!("duplicate cover id '{}'", set.id)));
            }
            let indices: BTreeSet<usize> = set.indices.into_iter().collect();
            if let Some(&bad) = indices.iter().find(|&&i| i >= cloud_len) {
                return Err(Error::input(format!(
                    "cover set '{}' has index {bad} outside a cloud of {cloud_len} points",
                    set.id
                )));
            }
            for &i in &indices {
                seen[i] = true;
            }
            clean.push(CoverSet {
                id: set.id,
                indices: indices.into_iter().collect(),
            });
        }
        let uncovered: Vec<usize> = (0..cloud_len).filter(|&i| !seen[i]).collect();
        if !uncovered.is_empty() {
            return Err(Error::input(format!(
                "the sets do not cover the cloud; uncovered indices {uncovered:?}"
            )));
        }
        Ok(Cover { sets: clean })
    }

    /// Cover by the cloud members of the given balls, in order.
    pub fn from_balls(cloud: &PointCloud, balls: &[(String, Ball)]) -> Result<Self> {
        let sets = balls
            .iter()
            .map(|(id, b)| {
                Ok(CoverSet {
                    id: id.clone(),
                    indices: ball_members(cloud, b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Cover::new(cloud.len(), sets)
    }

    pub fn sets(&self) -> &[CoverSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: usize, point: usize) -> bool {
        self.sets[set].indices.binary_search(&point).is_ok()
    }

    /// Position of the first set containing `point`.
    pub fn first_containing(&self, point: usize) -> Option<usize> {
        (0..self.sets.len()).find(|&s| self.contains(s, point))
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(id: &str, idx: &[usize]) -> CoverSet {
        CoverSet {
            id: id.into(),
            indices: idx.to_vec(),
        }
    }

    #[test]
    fn validation() {
        assert!(Cover::new(3, vec![set("a", &[0, 1]), set("b", &[2, 1])]).is_ok());
        assert!(Cover::new(3, vec![set("a", &[0, 1])]).is_err());
        assert!(Cover::new(2, vec![set("a", &[0, 1]), set("a", &[1])]).is_err());
        assert!(Cover::new(2, vec![set("a", &[0, 1, 5])]).is_err());
        assert!(Cover::new(0, vec![]).is_err());
    }

    #[test]
    fn first_set_wins() {
        let c = Cover::new(3, vec![set("a", &[2, 0]), set("b", &[0, 1])]).unwrap();
        assert_eq!(c.sets()[0].indices, vec![0, 2]);
        assert_eq!(c.first_containing(0), Some(0));
        assert_eq!(c.first_containing(1), Some(1));
    }
}
