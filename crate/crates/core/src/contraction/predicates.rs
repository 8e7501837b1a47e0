use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::vector::dist_sq;
use crate::geometry::PointSet;

fn check_pair(p: &PointSet, q: &PointSet) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    if p.len() != q.len() {
        return Err(Error::InvalidParameter(format!(
            "point sets differ in size: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// `|q_i − q_j| ≤ |p_i − p_j|` for every pair of labels.
pub fn is_contraction(p: &PointSet, q: &PointSet) -> Result<bool> {
    check_pair(p, q)?;
    let n = p.len();
    Ok((0..n).all(|i| (i + 1..n).all(|j| dist_sq(q.point(i), q.point(j)) <= dist_sq(p.point(i), p.point(j)))))
}

/// `|q_i − q_j| ≤ λ ≤ |p_i − p_j|` for every pair of labels.
pub fn is_uniform_contraction(p: &PointSet, q: &PointSet, lambda: f64) -> Result<bool> {
    check_pair(p, q)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "separating value {lambda} must be positive"
        )));
    }
    let l2 = lambda * lambda;
    let n = p.len();
    Ok((0..n)
        .all(|i| (i + 1..n).all(|j| dist_sq(q.point(i), q.point(j)) <= l2 && l2 <= dist_sq(p.point(i), p.point(j)))))
}

/// A pair `(P, Q)` with separating value `λ` and ball radius `r`.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionInstance {
    pub p: PointSet,
    pub q: PointSet,
    pub lambda: f64,
    pub r: f64,
}

impl ContractionInstance {
    pub fn new(p: PointSet, q: PointSet, lambda: f64, r: f64) -> Result<Self> {
        check_pair(&p, &q)?;
        if !(lambda > 0.0) || !(r > 0.0) {
            return Err(Error::InvalidParameter("λ and r must be positive".into()));
        }
        Ok(ContractionInstance { p, q, lambda, r })
    }

    pub fn is_contraction(&self) -> bool {
        is_contraction(&self.p, &self.q).unwrap_or(false)
    }

    pub fn is_uniform(&self) -> bool {
        is_uniform_contraction(&self.p, &self.q, self.lambda).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(pts: &[[f64; 2]]) -> PointSet {
        PointSet::new(2, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn scaling_about_centroid_contracts() {
        let p = ps(&[[0.0, 0.0], [2.0, 0.0], [1.0, 3.0], [-1.0, 1.0]]);
        let c = [0.5, 1.0];
        let q = ps(&p
            .iter()
            .map(|x| [c[0] + 0.5 * (x[0] - c[0]), c[1] + 0.5 * (x[1] - c[1])])
            .collect::<Vec<_>>());
        assert!(is_contraction(&p, &q).unwrap());
        assert!(!is_contraction(&q, &p).unwrap());
    }

    #[test]
    fn grid_against_small_cluster() {
        let p = ps(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let q = ps(&[[0.0, 0.0], [0.3, 0.1], [0.1, 0.4], [-0.2, 0.2]]);
        assert!(is_uniform_contraction(&p, &q, 1.0).unwrap());
        assert!(!is_uniform_contraction(&p, &q, 1.01).unwrap());
    }

    #[test]
    fn identity_is_uniform_only_for_equidistant_sets() {
        let pair = ps(&[[0.0, 0.0], [0.6, 0.8]]);
        assert!(is_uniform_contraction(&pair, &pair, 1.0).unwrap());
        let square = ps(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        for lambda in [0.5, 1.0, 1.2, 2f64.sqrt()] {
            assert!(!is_uniform_contraction(&square, &square, lambda).unwrap());
        }
    }

    #[test]
    fn mismatched_sizes() {
        let p = ps(&[[0.0, 0.0], [1.0, 0.0]]);
        let q = ps(&[[0.0, 0.0]]);
        assert!(is_contraction(&p, &q).is_err());
        assert!(ContractionInstance::new(p.clone(), q, 1.0, 1.0).is_err());
        assert!(is_uniform_contraction(&p, &p, 0.0).is_err());
    }
}
