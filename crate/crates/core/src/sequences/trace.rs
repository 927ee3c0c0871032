use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::report::canonical_float;
use crate::space::PhiMetricSpace;

/// A recorded sequence `x_k, x_{k+1}, …` with cached step distances
/// `d(x_n, x_{n+1})`. `start_index` is `k`: 1 for sequences written
/// `{x_n}_{n≥1}`, 0 for iteration traces starting at `x_0`.
#[derive(Clone, Debug)]
pub struct Trace {
    space: PhiMetricSpace,
    points: Vec<Point>,
    step_dists: Vec<f64>,
    start_index: usize,
}

/// Serializable form of a [`Trace`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub space: String,
    pub start_index: usize,
    pub points: Vec<Point>,
    pub step_dists: Vec<f64>,
}

impl Trace {
    pub fn new(space: &PhiMetricSpace, points: Vec<Point>) -> Result<Self> {
        let mut t = Trace::empty(space);
        for p in points {
            t.push(p)?;
        }
        if t.points.is_empty() {
            return Err(Error::input("a trace needs at least one point"));
        }
        Ok(t)
    }

    /// Scalar sequence on a one-dimensional space.
    pub fn from_scalars(space: &PhiMetricSpace, xs: impl IntoIterator<Item = f64>) -> Result<Self> {
        let points = xs
            .into_iter()
            .map(|x| Point::new(vec![x]))
            .collect::<Result<Vec<_>>>()?;
        Trace::new(space, points)
    }

    pub(crate) fn empty(space: &PhiMetricSpace) -> Self {
        Trace {
            space: space.clone(),
            points: Vec::new(),
            step_dists: Vec::new(),
            start_index: 1,
        }
    }

    pub fn with_start_index(mut self, k: usize) -> Self {
        self.start_index = k;
        self
    }

    pub fn push(&mut self, p: Point) -> Result<()> {
        p.ensure_dim(self.space.dim())?;
        if let Some(last) = self.points.last() {
            self.step_dists.push(self.space.distance(last, &p)?);
        }
        self.points.push(p);
        Ok(())
    }

    pub fn space(&self) -> &PhiMetricSpace {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn step_dists(&self) -> &[f64] {
        &self.step_dists
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&Point> {
        self.points.last()
    }

    /// Sequence index of the element stored at `pos`.
    pub fn index_of(&self, pos: usize) -> usize {
        self.start_index + pos
    }

    pub fn record(&self) -> TraceRecord {
        TraceRecord {
            space: self.space.label().to_owned(),
            start_index: self.start_index,
            points: self.points.clone(),
            step_dists: self.step_dists.clone(),
        }
    }

    /// Rows `index, x0, …, step_dist`; the step column holds
    /// `d(x_n, x_{n+1})` and is empty on the last row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let dim = self.space.dim();
        let mut header = vec!["index".to_owned()];
        header.extend((0..dim).map(|i| format!("x{i}")));
        header.push("step_dist".to_owned());
        w.write_record(&header)?;
        for (pos, p) in self.points.iter().enumerate() {
            let mut row = vec![self.index_of(pos).to_string()];
            row.extend(p.coords().iter().map(|c| canonical_float(*c)));
            row.push(
                self.step_dists
                    .get(pos)
                    .map(|d| canonical_float(*d))
                    .unwrap_or_default(),
            );
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::squared_euclidean;
    use crate::point::BoxDomain;

    #[test]
    fn steps_match_recomputation() {
        let s = squared_euclidean(BoxDomain::cube(1, -5.0, 5.0).unwrap());
        let t = Trace::from_scalars(&s, [0.0, 1.0, 3.0]).unwrap();
        assert_eq!(t.step_dists(), &[1.0, 4.0]);
        for (k, w) in t.points().windows(2).enumerate() {
            assert_eq!(t.step_dists()[k], s.distance(&w[0], &w[1]).unwrap());
        }
        assert!(Trace::from_scalars(&s, []).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = squared_euclidean(BoxDomain::cube(1, -5.0, 5.0).unwrap());
        let t = Trace::from_scalars(&s, [1.0, 0.5])
            .unwrap()
            .with_start_index(0);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,x0,step_dist");
        assert_eq!(lines[1], "0,1.0000000000000000e0,2.5000000000000000e-1");
        assert_eq!(lines[2], "1,5.0000000000000000e-1,");
    }
}
