use rand::Rng;
use rayon::prelude::*;

use super::projection::{find_common_point, BallConstraint, Feasibility};
use super::rng::{shard_rng, uniform_in_ball};
use super::support::v1_estimate;
use super::{shard_sizes, Estimate, EstimatorConfig, Method, SHARDS};
use crate::error::{Error, Result};
use crate::geometry::vector::{dist_sq, dot};
use crate::geometry::{binomial, omega, BallBody, BodyStatus};

/// `V_d` by rejection sampling in `B[c, r]`, where `c` is the circumcenter
/// of the generators. Every member is within `r` of every generator, hence
/// within `r` of `c`.
pub fn mc_volume(body: &BallBody, cfg: &EstimatorConfig) -> Result<Estimate> {
    cfg.validate()?;
    match body.status() {
        BodyStatus::Empty | BodyStatus::Point { .. } => return Ok(Estimate::exact(0.0, Method::Exact)),
        BodyStatus::FullDim => {}
    }
    let d = body.dim();
    let r = body.radius();
    let center = body.center();
    let hits: usize = shard_sizes(cfg.samples)
        .into_par_iter()
        .enumerate()
        .map(|(shard, n)| {
            let mut rng = shard_rng(cfg.seed, shard as u64);
            (0..n)
                .filter(|_| body.contains_unchecked(&uniform_in_ball(&mut rng, center, r)))
                .count()
        })
        .sum();
    let n = cfg.samples as f64;
    let enclosing = omega(d) * r.powi(d as i32);
    let p = hits as f64 / n;
    Ok(Estimate {
        value: enclosing * p,
        std_error: enclosing * (p * (1.0 - p) / n).sqrt(),
        samples_used: cfg.samples,
        method: Method::MonteCarloVolume,
        seed: cfg.seed,
        flagged: 0,
    })
}

/// `V_k` for any `k ∈ 1..=d`.
///
/// `k = d` is [`mc_volume`] and `k = 1` is [`v1_estimate`]. Other `k` use
/// projection averaging: `V_k = C(d,k)·ω_d/(ω_k·ω_{d-k})` times the mean
/// `k`-volume of the projection of the body onto a random `k`-subspace.
/// `cfg.directions` subspaces are drawn and the sample budget is divided
/// among them.
pub fn vk_estimate(body: &BallBody, k: usize, cfg: &EstimatorConfig) -> Result<Estimate> {
    cfg.validate()?;
    let d = body.dim();
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={d}")));
    }
    if k == d {
        return mc_volume(body, cfg);
    }
    if k == 1 {
        return v1_estimate(body, cfg);
    }
    match body.status() {
        BodyStatus::Empty | BodyStatus::Point { .. } => return Ok(Estimate::exact(0.0, Method::Exact)),
        BodyStatus::FullDim => {}
    }
    let m = cfg.directions;
    let per_subspace = (cfg.samples / m).max(1);
    let projected: Vec<(f64, usize)> = (0..m)
        .into_par_iter()
        .map(|i| projection_volume(body, k, per_subspace, cfg, i as u64))
        .collect();
    let vols: Vec<f64> = projected.iter().map(|p| p.0).collect();
    let flagged = projected.iter().map(|p| p.1).sum();
    let mean = vols.iter().sum::<f64>() / m as f64;
    let var = if m > 1 {
        vols.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64
    } else {
        // a single subspace carries no spread information; fall back to
        // the binomial error of its own hit fraction
        let enclosing = omega(k) * body.radius().powi(k as i32);
        let p = mean / enclosing;
        enclosing * enclosing * p * (1.0 - p) / per_subspace as f64
    };
    let factor = binomial(d, k) * omega(d) / (omega(k) * omega(d - k));
    Ok(Estimate {
        value: factor * mean,
        std_error: factor * (var / m as f64).sqrt(),
        samples_used: m * per_subspace,
        method: Method::Kubota,
        seed: cfg.seed,
        flagged,
    })
}

/// Orthonormal basis of a uniformly random `k`-subspace (Gram-Schmidt on a
/// Gaussian frame).
fn random_frame<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    while basis.len() < k {
        let mut v = super::rng::unit_vector(rng, d);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

/// Estimated `k`-volume of the projection onto one random subspace, plus
/// the number of samples whose fiber solve failed twice.
fn projection_volume(body: &BallBody, k: usize, samples: usize, cfg: &EstimatorConfig, index: u64) -> (f64, usize) {
    // subspace streams are offset past the shard streams used elsewhere
    let mut rng = shard_rng(cfg.seed, SHARDS as u64 + index);
    let d = body.dim();
    let r = body.radius();
    let frame = random_frame(&mut rng, d, k);

    // split each generator into its coordinates in E and its E^⊥ component
    let split = |x: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let a: Vec<f64> = frame.iter().map(|e| dot(x, e)).collect();
        let mut b = x.to_vec();
        for (ai, e) in a.iter().zip(&frame) {
            b.iter_mut().zip(e).for_each(|(bj, ej)| *bj -= ai * ej);
        }
        (a, b)
    };
    let gens: Vec<(Vec<f64>, Vec<f64>)> = body.generators().iter().map(split).collect();
    let (center_e, center_perp) = split(body.center());

    let mut hits = 0usize;
    let mut flagged = 0usize;
    for _ in 0..samples {
        let y = uniform_in_ball(&mut rng, &center_e, r);
        let mut fiber = Vec::with_capacity(gens.len());
        let mut outside = false;
        for (a, b) in &gens {
            let slack = r * r - dist_sq(&y, a);
            if slack < 0.0 {
                outside = true;
                break;
            }
            fiber.push(BallConstraint {
                center: b.clone(),
                radius: slack.sqrt(),
            });
        }
        if outside {
            continue;
        }
        let tol = cfg.feasibility_tolerance;
        let mut verdict = find_common_point(&fiber, &center_perp, tol, cfg.max_projection_iters);
        if verdict == Feasibility::NoConvergence {
            verdict = find_common_point(&fiber, &center_perp, tol, 2 * cfg.max_projection_iters);
        }
        match verdict {
            Feasibility::Feasible(_) => hits += 1,
            Feasibility::Infeasible => {}
            Feasibility::NoConvergence => flagged += 1,
        }
    }
    let enclosing = omega(k) * r.powi(k as i32);
    (enclosing * hits as f64 / samples as f64, flagged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ball_intrinsic_volume, dual, PointSet};

    fn lens2() -> BallBody {
        dual(&PointSet::new(2, vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn ball_volume_is_exact_hit_rate() {
        let b = dual(&PointSet::single(&[0.3, 0.0, -1.0]).unwrap(), 0.8).unwrap();
        let est = mc_volume(&b, &EstimatorConfig::default()).unwrap();
        let exact = ball_intrinsic_volume(3, 3, 0.8).unwrap();
        assert!((est.value - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn lens_area_within_confidence() {
        // area of the lens with centre distance a = r: r²(2π/3 − √3/2)
        let exact = 2.0 * std::f64::consts::PI / 3.0 - 3f64.sqrt() / 2.0;
        let cfg = EstimatorConfig {
            samples: 400_000,
            seed: 21,
            ..Default::default()
        };
        let est = mc_volume(&lens2(), &cfg).unwrap();
        assert!((est.value - exact).abs() <= 3.0 * est.std_error, "{est:?} vs {exact}");
        assert!(est.std_error > 0.0);
    }

    #[test]
    fn empty_and_point_are_exact_zero() {
        let empty = dual(&PointSet::new(2, vec![vec![-3.0, 0.0], vec![3.0, 0.0]]).unwrap(), 1.0).unwrap();
        let e = mc_volume(&empty, &EstimatorConfig::default()).unwrap();
        assert_eq!((e.value, e.std_error, e.method), (0.0, 0.0, Method::Exact));
        let pt = dual(&PointSet::new(2, vec![vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap(), 1.0).unwrap();
        assert_eq!(vk_estimate(&pt, 1, &EstimatorConfig::default()).unwrap().value, 0.0);
    }

    #[test]
    fn kubota_on_ball_is_exact() {
        let b = dual(&PointSet::single(&[0.0, 1.0, 0.0, 0.0]).unwrap(), 0.7).unwrap();
        let cfg = EstimatorConfig {
            samples: 2000,
            directions: 20,
            ..Default::default()
        };
        let est = vk_estimate(&b, 2, &cfg).unwrap();
        let exact = ball_intrinsic_volume(4, 2, 0.7).unwrap();
        assert!((est.value - exact).abs() < 1e-12 * exact, "{est:?} {exact}");
    }

    #[test]
    fn kubota_on_lens_body_in_3d() {
        // V_2 of a 3D body is half its surface area
        let b = dual(
            &PointSet::new(3, vec![vec![-0.4, 0.0, 0.0], vec![0.4, 0.0, 0.0]]).unwrap(),
            1.0,
        )
        .unwrap();
        let cfg = EstimatorConfig {
            samples: 200_000,
            directions: 200,
            seed: 5,
            ..Default::default()
        };
        let est = vk_estimate(&b, 2, &cfg).unwrap();
        // surface of a symmetric lens: two spherical caps of height h = r − a/2
        let h = 1.0 - 0.4;
        let exact = 0.5 * 2.0 * (2.0 * std::f64::consts::PI * 1.0 * h);
        assert!((est.value - exact).abs() <= 3.0 * est.std_error, "{est:?} vs {exact}");
        assert_eq!(est.flagged, 0);
    }

    #[test]
    fn delegation_and_errors() {
        let cfg = EstimatorConfig {
            samples: 1000,
            directions: 8,
            ..Default::default()
        };
        assert_eq!(
            vk_estimate(&lens2(), 2, &cfg).unwrap(),
            mc_volume(&lens2(), &cfg).unwrap()
        );
        assert_eq!(
            vk_estimate(&lens2(), 1, &cfg).unwrap(),
            v1_estimate(&lens2(), &cfg).unwrap()
        );
        assert!(vk_estimate(&lens2(), 3, &cfg).is_err());
        assert!(vk_estimate(&lens2(), 0, &cfg).is_err());
    }

    #[test]
    fn identical_seeds_are_bit_identical() {
        let cfg = EstimatorConfig {
            samples: 10_000,
            seed: 77,
            ..Default::default()
        };
        let a = mc_volume(&lens2(), &cfg).unwrap();
        let b = mc_volume(&lens2(), &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
