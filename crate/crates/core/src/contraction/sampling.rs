use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{shard_rng, uniform_in_ball};
use crate::geometry::vector::dist_sq;
use crate::geometry::PointSet;

const ATTEMPTS_BEFORE_GROWTH: usize = 200;
const GROWTH: f64 = 1.25;

fn check(d: usize, n: usize, lambda: f64) -> Result<()> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter("dimension and N must be positive".into()));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("λ = {lambda} must be positive")));
    }
    Ok(())
}

/// `N` points with all pairwise distances at least `λ`, drawn one at a time
/// uniformly from a centered cube of side `λ·N^{1/d}` that grows whenever a
/// point keeps being rejected.
pub fn sample_separated(d: usize, n: usize, lambda: f64, seed: u64) -> Result<PointSet> {
    check(d, n, lambda)?;
    let mut rng = shard_rng(seed, 0);
    let mut side = lambda * (n as f64).powf(1.0 / d as f64);
    let l2 = lambda * lambda;
    let mut coords: Vec<f64> = Vec::with_capacity(n * d);
    while coords.len() < n * d {
        let mut placed = false;
        for _ in 0..ATTEMPTS_BEFORE_GROWTH {
            let cand: Vec<f64> = (0..d).map(|_| side * (rng.random::<f64>() - 0.5)).collect();
            if coords.chunks_exact(d).all(|p| dist_sq(p, &cand) >= l2) {
                coords.extend_from_slice(&cand);
                placed = true;
                break;
            }
        }
        if !placed {
            side *= GROWTH;
        }
    }
    PointSet::from_flat(d, coords)
}

/// `N` points uniform in `B[0, λ/2]`, so every pairwise distance is at most `λ`.
pub fn sample_clustered(d: usize, n: usize, lambda: f64, seed: u64) -> Result<PointSet> {
    check(d, n, lambda)?;
    let mut rng = shard_rng(seed, 1);
    let origin = vec![0.0; d];
    let coords: Vec<f64> = (0..n)
        .flat_map(|_| uniform_in_ball(&mut rng, &origin, lambda / 2.0))
        .collect();
    PointSet::from_flat(d, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::is_uniform_contraction;

    #[test]
    fn single_point_sets() {
        assert_eq!(sample_separated(3, 1, 1.0, 0).unwrap().len(), 1);
        assert_eq!(sample_clustered(3, 1, 1.0, 0).unwrap().len(), 1);
    }

    #[test]
    fn separated_pairwise_distances() {
        for seed in 0..20 {
            let p = sample_separated(2, 2, 0.7, seed).unwrap();
            assert!(dist_sq(p.point(0), p.point(1)) >= 0.49);
            let p = sample_separated(3, 40, 1.0, seed).unwrap();
            assert!(p.diameter_sq() >= 1.0);
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    assert!(dist_sq(p.point(i), p.point(j)) >= 1.0);
                }
            }
        }
    }

    #[test]
    fn clustered_diameter() {
        for seed in 0..20 {
            let q = sample_clustered(4, 30, 1.3, seed).unwrap();
            assert!(q.diameter_sq() <= 1.3 * 1.3);
        }
    }

    #[test]
    fn generated_pair_is_uniform_contraction() {
        let p = sample_separated(3, 15, 1.0, 8).unwrap();
        let q = sample_clustered(3, 15, 1.0, 8).unwrap();
        assert!(is_uniform_contraction(&p, &q, 1.0).unwrap());
    }

    #[test]
    fn seeded_generators_are_pure() {
        assert_eq!(
            sample_separated(3, 10, 1.0, 5).unwrap(),
            sample_separated(3, 10, 1.0, 5).unwrap()
        );
        assert_ne!(
            sample_separated(3, 10, 1.0, 5).unwrap(),
            sample_separated(3, 10, 1.0, 6).unwrap()
        );
    }
}
