use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, ordered point configuration in `dim` dimensions.
///
/// Order is significant: index `i` is the label of the point, which is what
/// pairs `p_i` with `q_i` in a contraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<PointSetRepr> for PointSet {
    type Error = Error;

    fn try_from(repr: PointSetRepr) -> Result<Self> {
        PointSet::new(repr.dim, repr.points)
    }
}

impl From<PointSet> for PointSetRepr {
    fn from(ps: PointSet) -> Self {
        PointSetRepr {
            dim: ps.dim,
            points: ps.iter().map(<[f64]>::to_vec).collect(),
        }
    }
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidParameter(
                "point set must contain at least one point".into(),
            ));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a point set from row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form a nonempty list of {dim}-dimensional points",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coordinate {bad}")));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn single(point: &[f64]) -> Result<Self> {
        Self::from_flat(point.len(), point.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: a point set holds at least one point.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Concatenation `X ∪ Y`, keeping the order of both operands.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PointSet { dim: self.dim, coords })
    }

    /// The sub-configuration made of the given indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidParameter(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        Self::from_flat(self.dim, coords)
    }

    pub fn diameter_sq(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.max(super::vector::dist_sq(self.point(i), self.point(j)));
            }
        }
        best
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Writes one point per row under a `x1,…,xd` header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record((1..=self.dim).map(|i| format!("x{i}")))?;
        for p in self.iter() {
            w.write_record(p.iter().map(|c| format!("{c:?}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let dim = r.headers()?.len();
        let mut coords = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rec.len(),
                });
            }
            for field in rec.iter() {
                coords.push(
                    field
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad coordinate {field:?}: {e}")))?,
                );
            }
        }
        Self::from_flat(dim, coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_empty_input() {
        assert!(PointSet::new(2, vec![]).is_err());
        assert!(matches!(
            PointSet::new(2, vec![vec![0.0, 1.0], vec![1.0]]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(PointSet::new(1, vec![vec![f64::NAN]]).is_err());
        assert!(PointSet::new(0, vec![vec![]]).is_err());
    }

    #[test]
    fn json_layout() {
        let ps = PointSet::new(2, vec![vec![0.5, -1.0], vec![2.0, 3.0]]).unwrap();
        let text = ps.to_json().unwrap();
        assert_eq!(text, r#"{"dim":2,"points":[[0.5,-1.0],[2.0,3.0]]}"#);
        assert_eq!(PointSet::from_json(&text).unwrap(), ps);
        assert!(PointSet::from_json(r#"{"dim":3,"points":[[1,2]]}"#).is_err());
    }

    #[test]
    fn csv_round_trip_keeps_order() {
        let ps = PointSet::new(3, vec![vec![0.1, 0.2, 0.3], vec![-4.0, 5.5, 1e-17]]).unwrap();
        let mut buf = Vec::new();
        ps.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,x3\n"));
        assert_eq!(PointSet::read_csv(buf.as_slice()).unwrap(), ps);
    }

    #[test]
    fn union_preserves_labels() {
        let a = PointSet::new(1, vec![vec![1.0], vec![2.0]]).unwrap();
        let b = PointSet::new(1, vec![vec![3.0]]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(u.point(2), &[3.0]);
        let c = PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        assert!(a.union(&c).is_err());
    }
}
