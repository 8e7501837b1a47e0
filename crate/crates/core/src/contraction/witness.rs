use rayon::prelude::*;
use serde::Serialize;

use super::bounds::jung_radius;
use crate::error::{Error, Result};
use crate::estimators::{shard_rng, shard_sizes, uniform_in_ball};
use crate::geometry::vector::dist;
use crate::geometry::{circumradius, dual, PointSet};

/// Outcome of a sampled containment test `S ⊆ B[center, radius]` or
/// `B[center, radius] ⊆ S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Points actually tested.
    pub checked: usize,
    pub exceptions: usize,
    /// Largest amount by which a tested point missed, `0` if none did.
    pub max_excess: f64,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.exceptions == 0
    }
}

/// Samples `B[x, r − jung_radius(d, λ)]`, with `x` the circumcenter of `q`,
/// and counts the points outside `q^r`.
pub fn jung_witness(q: &PointSet, lambda: f64, r: f64, samples: usize, seed: u64) -> Result<WitnessReport> {
    if q.diameter_sq().sqrt() > lambda {
        return Err(Error::InvalidParameter(format!(
            "point set has diameter above λ = {lambda}"
        )));
    }
    let body = dual(q, r)?;
    let center = circumradius(q).center;
    let radius = r - jung_radius(q.dim(), lambda);
    if radius <= 0.0 {
        return Ok(WitnessReport {
            center,
            radius,
            checked: 0,
            exceptions: 0,
            max_excess: 0.0,
        });
    }
    let (exceptions, max_excess) = shard_sizes(samples)
        .into_par_iter()
        .enumerate()
        .map(|(shard, n)| {
            let mut rng = shard_rng(seed, shard as u64);
            let mut bad = 0usize;
            let mut worst = 0.0f64;
            for _ in 0..n {
                let y = uniform_in_ball(&mut rng, &center, radius);
                if !body.contains_unchecked(&y) {
                    bad += 1;
                    worst = worst.max(body.max_violation(&y));
                }
            }
            (bad, worst)
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    Ok(WitnessReport {
        center,
        radius,
        checked: samples,
        exceptions,
        max_excess,
    })
}

/// Draws members of `p^r` by rejection from `B[c, r]` (`c` the circumcenter
/// of `p`) and measures how far they reach outside `B[c, radius]`.
/// `tol` is an absolute slack on the containment.
pub fn members_within(p: &PointSet, r: f64, radius: f64, tol: f64, samples: usize, seed: u64) -> Result<WitnessReport> {
    let body = dual(p, r)?;
    let center = body.center().to_vec();
    if body.is_empty() {
        return Ok(WitnessReport {
            center,
            radius,
            checked: 0,
            exceptions: 0,
            max_excess: 0.0,
        });
    }
    let (checked, exceptions, max_excess) = shard_sizes(samples)
        .into_par_iter()
        .enumerate()
        .map(|(shard, n)| {
            let mut rng = shard_rng(seed, shard as u64);
            let mut hits = 0usize;
            let mut bad = 0usize;
            let mut worst = 0.0f64;
            for _ in 0..n {
                let y = uniform_in_ball(&mut rng, &center, r);
                if !body.contains_unchecked(&y) {
                    continue;
                }
                hits += 1;
                let excess = dist(&y, &center) - radius;
                if excess > tol {
                    bad += 1;
                    worst = worst.max(excess);
                }
            }
            (hits, bad, worst)
        })
        .reduce(|| (0, 0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2.max(b.2)));
    Ok(WitnessReport {
        center,
        radius,
        checked,
        exceptions,
        max_excess,
    })
}

/// `√(r² − cr(p)²)`: every member of `p^r` lies this close to the
/// circumcenter of `p`.
pub fn circumcenter_reach(p: &PointSet, r: f64) -> f64 {
    let cr = circumradius(p).radius;
    (r * r - cr * cr).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::{naive_outer_radius, sample_clustered, sample_separated};

    #[test]
    fn jung_side_holds_for_clusters() {
        for seed in 0..5 {
            let q = sample_clustered(3, 12, 0.8, seed).unwrap();
            let rep = jung_witness(&q, 0.8, 1.0, 2000, seed).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert_eq!(rep.checked, 2000);
        }
    }

    #[test]
    fn reach_bound_holds() {
        let p = sample_separated(3, 6, 0.3, 9).unwrap();
        let reach = circumcenter_reach(&p, 1.0);
        let rep = members_within(&p, 1.0, reach, 1e-12, 20_000, 1).unwrap();
        assert!(rep.checked > 0 && rep.holds(), "{rep:?}");
    }

    #[test]
    fn close_pair_escapes_the_naive_outer_ball() {
        let p = PointSet::new(3, vec![vec![-0.05, 0.0, 0.0], vec![0.05, 0.0, 0.0]]).unwrap();
        let outer = naive_outer_radius(3, 2, 0.1, 1.0);
        let rep = members_within(&p, 1.0, outer, 1e-9, 50_000, 3).unwrap();
        assert!(rep.exceptions > 0);
        assert!(circumcenter_reach(&p, 1.0) > outer);
    }

    #[test]
    fn cluster_too_wide_is_rejected() {
        let q = PointSet::new(2, vec![vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(jung_witness(&q, 1.0, 1.0, 10, 0).is_err());
    }
}
