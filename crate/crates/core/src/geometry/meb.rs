//! Minimal enclosing ball by Welzl's algorithm with the move-to-front
//! heuristic, in any dimension.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::point_set::PointSet;
use super::vector::dist_sq;
use crate::error::Result;

/// Shuffle seed used when the caller does not supply one.
pub const DEFAULT_MEB_SEED: u64 = 0x5eed_ba11;

/// Relative slack when testing whether a point lies in a candidate ball.
const CONTAINS_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnclosingBall {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Indices (into the input) of the points on the boundary that determine
    /// the ball; at most `dim + 1` of them.
    pub support: Vec<usize>,
}

impl EnclosingBall {
    pub fn contains(&self, p: &[f64]) -> bool {
        contains(&self.center, self.radius, p)
    }
}

fn contains(center: &[f64], radius: f64, p: &[f64]) -> bool {
    if radius < 0.0 {
        return false;
    }
    let r2 = radius * radius;
    dist_sq(center, p) <= r2 + CONTAINS_REL_TOL * r2.max(1e-300) + 1e-300
}

/// Circumradius and circumcenter of `points` with the default shuffle seed.
pub fn circumradius(points: &PointSet) -> EnclosingBall {
    circumradius_seeded(points, DEFAULT_MEB_SEED)
}

/// Minimal enclosing ball; the result depends only on the input and `seed`.
pub fn circumradius_seeded(points: &PointSet, seed: u64) -> EnclosingBall {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut solver = Welzl {
        points,
        order,
        support: Vec::with_capacity(points.dim() + 1),
    };
    let n = points.len();
    let (center, radius) = solver.run(n);
    // Report the points actually on the boundary (within tolerance).
    let r2 = radius * radius;
    let mut support: Vec<usize> = (0..n)
        .filter(|&i| (dist_sq(&center, points.point(i)) - r2).abs() <= 1e-9 * r2.max(1e-300))
        .collect();
    support.truncate(points.dim() + 1);
    EnclosingBall {
        center,
        radius,
        support,
    }
}

struct Welzl<'a> {
    points: &'a PointSet,
    order: Vec<usize>,
    support: Vec<usize>,
}

impl Welzl<'_> {
    fn run(&mut self, end: usize) -> (Vec<f64>, f64) {
        let (mut center, mut radius) = self.ball_of_support();
        if self.support.len() == self.points.dim() + 1 {
            return (center, radius);
        }
        for i in 0..end {
            let idx = self.order[i];
            if !contains(&center, radius, self.points.point(idx)) {
                self.support.push(idx);
                (center, radius) = self.run(i);
                self.support.pop();
                let moved = self.order.remove(i);
                self.order.insert(0, moved);
            }
        }
        (center, radius)
    }

    /// Smallest ball with every support point on its boundary: the
    /// circumcenter within the affine hull of the support.
    fn ball_of_support(&self) -> (Vec<f64>, f64) {
        let pts: Vec<&[f64]> = self.support.iter().map(|&i| self.points.point(i)).collect();
        match circumball(&pts) {
            Some(b) => b,
            None => (vec![0.0; self.points.dim()], -1.0),
        }
    }
}

/// Circumcenter and circumradius of a set of points within their affine
/// hull. `None` for an empty set. Affinely dependent input falls back to a
/// least-squares center.
pub fn circumball(pts: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let first = *pts.first()?;
    let dim = first.len();
    let m = pts.len() - 1;
    if m == 0 {
        return Some((first.to_vec(), 0.0));
    }
    let rows: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    let gram = DMatrix::from_fn(m, m, |i, j| 2.0 * super::vector::dot(&rows[i], &rows[j]));
    let rhs = DVector::from_fn(m, |i, _| super::vector::dot(&rows[i], &rows[i]));
    let lambda = gram
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|l| l.iter().all(|x| x.is_finite()))
        .or_else(|| gram.svd(true, true).solve(&rhs, 1e-14).ok())?;
    let mut center = first.to_vec();
    for (l, row) in lambda.iter().zip(&rows) {
        for k in 0..dim {
            center[k] += l * row[k];
        }
    }
    let radius = pts.iter().map(|p| dist_sq(&center, p)).fold(0.0f64, f64::max).sqrt();
    Some((center, radius))
}

/// Convenience wrapper returning `(radius, center)`.
pub fn circumradius_of(points: &PointSet) -> Result<(f64, Vec<f64>)> {
    let b = circumradius(points);
    Ok((b.radius, b.center))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(dim: usize, pts: &[&[f64]]) -> PointSet {
        PointSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_point() {
        let b = circumradius(&ps(3, &[&[1.0, 2.0, 3.0]]));
        assert_eq!(b.radius, 0.0);
        assert_eq!(b.center, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_points() {
        let b = circumradius(&ps(2, &[&[0.0, 0.0], &[3.0, 4.0]]));
        assert!((b.radius - 2.5).abs() < 1e-15);
        assert!((b.center[0] - 1.5).abs() < 1e-15 && (b.center[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle() {
        let s = 2.0;
        let h = s * 3f64.sqrt() / 2.0;
        let b = circumradius(&ps(2, &[&[0.0, 0.0], &[s, 0.0], &[s / 2.0, h]]));
        assert!((b.radius - s / 3f64.sqrt()).abs() < 1e-14);
        assert!((b.center[0] - s / 2.0).abs() < 1e-14);
        assert!((b.center[1] - h / 3.0).abs() < 1e-14);
        assert_eq!(b.support.len(), 3);
    }

    #[test]
    fn obtuse_triangle_uses_longest_edge() {
        let b = circumradius(&ps(2, &[&[-1.0, 0.0], &[1.0, 0.0], &[0.0, 0.2]]));
        assert!((b.radius - 1.0).abs() < 1e-14);
        assert!(b.center[1].abs() < 1e-14);
    }

    #[test]
    fn regular_simplex_in_3d() {
        let pts = ps(
            3,
            &[
                &[1.0, 1.0, 1.0],
                &[1.0, -1.0, -1.0],
                &[-1.0, 1.0, -1.0],
                &[-1.0, -1.0, 1.0],
                &[0.1, 0.2, 0.0],
            ],
        );
        let b = circumradius(&pts);
        assert!((b.radius - 3f64.sqrt()).abs() < 1e-13);
        assert!(b.center.iter().all(|c| c.abs() < 1e-13));
    }

    #[test]
    fn duplicates_and_seed_independence() {
        let pts = ps(2, &[&[0.0, 0.0], &[0.0, 0.0], &[2.0, 0.0], &[2.0, 0.0], &[1.0, 0.5]]);
        let r0 = circumradius_seeded(&pts, 1).radius;
        for seed in 2..20 {
            assert!((circumradius_seeded(&pts, seed).radius - r0).abs() < 1e-14);
        }
        assert!((r0 - 1.0).abs() < 1e-14);
    }
}
