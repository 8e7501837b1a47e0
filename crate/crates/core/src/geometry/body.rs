use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::meb::{circumradius, EnclosingBall};
use super::point_set::PointSet;
use super::vector::dist_sq;
use crate::error::{Error, Result};

/// Relative tolerance separating a one-point body from a full-dimensional
/// one: `|cr − r| ≤ POINT_TOL · max(1, r)` is a point.
pub const POINT_TOL: f64 = 1e-12;

/// Shape class of an r-ball body: empty, a single point, or a body with
/// nonempty interior. No other case exists.
#[derive(Debug, Clone, PartialEq)]
pub enum BodyStatus {
    Empty,
    Point { witness: Vec<f64> },
    FullDim,
}

impl BodyStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BodyStatus::Empty => "empty",
            BodyStatus::Point { .. } => "point",
            BodyStatus::FullDim => "full_dim",
        }
    }
}

/// The r-ball body `X^r = ⋂_{x ∈ X} B[x, r]`, kept as its generators and
/// radius.
#[derive(Debug, Clone)]
pub struct BallBody {
    generators: PointSet,
    radius: f64,
    status: BodyStatus,
    meb: EnclosingBall,
    forced_empty: bool,
}

/// `X^r` for `r > 0`.
pub fn dual(generators: &PointSet, radius: f64) -> Result<BallBody> {
    BallBody::new(generators.clone(), radius)
}

impl BallBody {
    pub fn new(generators: PointSet, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "radius {radius} must be positive and finite"
            )));
        }
        let meb = circumradius(&generators);
        let status = classify(&meb, radius);
        Ok(BallBody {
            generators,
            radius,
            status,
            meb,
            forced_empty: false,
        })
    }

    fn forced_empty(generators: PointSet) -> Self {
        let meb = circumradius(&generators);
        BallBody {
            generators,
            radius: 0.0,
            status: BodyStatus::Empty,
            meb,
            forced_empty: true,
        }
    }

    pub fn generators(&self) -> &PointSet {
        &self.generators
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    pub fn status(&self) -> &BodyStatus {
        &self.status
    }

    pub fn is_empty(&self) -> bool {
        self.status == BodyStatus::Empty
    }

    /// Minimal enclosing ball of the generators.
    pub fn generator_ball(&self) -> &EnclosingBall {
        &self.meb
    }

    /// Center of the sampling region: any member lies within `radius` of it.
    pub fn center(&self) -> &[f64] {
        &self.meb.center
    }

    /// `max_i |q − x_i|² ≤ r²`, compared exactly.
    pub fn contains(&self, q: &[f64]) -> Result<bool> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.len(),
            });
        }
        Ok(self.contains_unchecked(q))
    }

    #[inline]
    pub fn contains_unchecked(&self, q: &[f64]) -> bool {
        if self.forced_empty {
            return false;
        }
        let r2 = self.radius * self.radius;
        self.generators.iter().all(|x| dist_sq(q, x) <= r2)
    }

    /// Largest `|q − x_i| − r`; nonpositive exactly for members.
    pub fn max_violation(&self, q: &[f64]) -> f64 {
        self.generators
            .iter()
            .map(|x| dist_sq(q, x).sqrt() - self.radius)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn classify(meb: &EnclosingBall, radius: f64) -> BodyStatus {
    let gap = meb.radius - radius;
    if gap.abs() <= POINT_TOL * radius.max(1.0) {
        BodyStatus::Point {
            witness: meb.center.clone(),
        }
    } else if gap > 0.0 {
        BodyStatus::Empty
    } else {
        BodyStatus::FullDim
    }
}

impl Serialize for BallBody {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BallBody", 5)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("radius", &self.radius)?;
        st.serialize_field("status", self.status.as_str())?;
        st.serialize_field("circumradius", &self.meb.radius)?;
        match &self.status {
            BodyStatus::Point { witness } => st.serialize_field("witness", witness)?,
            _ => st.skip_field("witness")?,
        }
        st.end()
    }
}

/// Result of dualizing a union of congruent balls.
#[derive(Debug, Clone)]
pub struct UnionDual {
    pub body: BallBody,
    /// Set when `outer ≤ inner`; the body is then reported empty.
    pub out_of_range: bool,
}

/// `(⋃_i B[x_i, inner])^outer`, which equals `X^{outer − inner}`.
pub fn dual_of_ball_union(centers: &PointSet, inner: f64, outer: f64) -> Result<UnionDual> {
    if !(inner >= 0.0) || !inner.is_finite() || !outer.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ball radius {inner} must be finite and nonnegative, dual radius {outer} finite"
        )));
    }
    if outer <= inner {
        return Ok(UnionDual {
            body: BallBody::forced_empty(centers.clone()),
            out_of_range: true,
        });
    }
    Ok(UnionDual {
        body: BallBody::new(centers.clone(), outer - inner)?,
        out_of_range: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(pts: &[[f64; 2]]) -> PointSet {
        PointSet::new(2, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_generator_is_a_ball() {
        let b = dual(&ps(&[[0.0, 0.0]]), 1.0).unwrap();
        assert_eq!(b.status(), &BodyStatus::FullDim);
        assert!(b.contains(&[0.6, 0.8]).unwrap());
        assert!(!b.contains(&[0.6, 0.81]).unwrap());
    }

    #[test]
    fn antipodal_pair_is_a_point() {
        let b = dual(&ps(&[[-1.0, 0.0], [1.0, 0.0]]), 1.0).unwrap();
        assert_eq!(
            b.status(),
            &BodyStatus::Point {
                witness: vec![0.0, 0.0]
            }
        );
        assert!(b.contains(&[0.0, 0.0]).unwrap());
        assert!(!b.contains(&[0.0, 1e-6]).unwrap());
    }

    #[test]
    fn far_pair_is_empty() {
        let b = dual(&ps(&[[-1.1, 0.0], [1.1, 0.0]]), 1.0).unwrap();
        assert!(b.is_empty());
        assert!(!b.contains(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn lens_membership() {
        let b = dual(&ps(&[[-0.5, 0.0], [0.5, 0.0]]), 1.0).unwrap();
        assert!(b.contains(&[0.0, 0.8]).unwrap());
        assert!(!b.contains(&[0.0, 0.9]).unwrap());
        // generators belong iff the diameter is at most r
        assert!(b.contains(&[0.5, 0.0]).unwrap());
        let wide = dual(&ps(&[[-0.6, 0.0], [0.6, 0.0]]), 1.0).unwrap();
        assert!(!wide.contains(&[0.6, 0.0]).unwrap());
    }

    #[test]
    fn parameter_errors() {
        assert!(dual(&ps(&[[0.0, 0.0]]), 0.0).is_err());
        assert!(dual(&ps(&[[0.0, 0.0]]), -2.0).is_err());
        let b = dual(&ps(&[[0.0, 0.0]]), 1.0).unwrap();
        assert!(matches!(b.contains(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn union_dual_shifts_radius() {
        let x = ps(&[[0.0, 0.0]]);
        let (r, lambda) = (1.0, 0.4);
        let u = dual_of_ball_union(&x, lambda / 2.0, r + lambda / 2.0).unwrap();
        assert!(!u.out_of_range);
        assert!((u.body.radius() - r).abs() < 1e-15);
        let same = dual_of_ball_union(&x, 0.0, 2.0).unwrap();
        assert_eq!(same.body.radius(), 2.0);

        let bad = dual_of_ball_union(&x, 1.0, 1.0).unwrap();
        assert!(bad.out_of_range);
        assert!(bad.body.is_empty());
        assert!(!bad.body.contains(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn serializes_status() {
        let b = dual(&ps(&[[-1.0, 0.0], [1.0, 0.0]]), 1.0).unwrap();
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["status"], "point");
        assert_eq!(v["radius"], 1.0);
        assert_eq!(v["generators"]["dim"], 2);
        assert_eq!(v["witness"][0], 0.0);
    }
}
