use rayon::prelude::*;

use super::kkt::Problem;
use super::projection::{project_onto, Projection};
use super::rng::{shard_rng, unit_vector};
use super::{Estimate, EstimatorConfig, Method};
use crate::error::{Error, Result};
use crate::geometry::vector::{add_scaled, dot};
use crate::geometry::{omega, BallBody, BodyStatus};

/// Upper limit on ascent steps for one support evaluation.
const MAX_ASCENT_STEPS: usize = 500;

/// `h_B(u) = max_{z ∈ B} ⟨u, z⟩` by projected gradient ascent.
pub fn support_function(body: &BallBody, u: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    if u.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: u.len(),
        });
    }
    if (dot(u, u).sqrt() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "support direction must be a unit vector".into(),
        ));
    }
    match body.status() {
        BodyStatus::Empty => Err(Error::EmptyBody),
        BodyStatus::Point { witness } => Ok(dot(u, witness)),
        BodyStatus::FullDim => {
            if body.generators().len() == 1 {
                return Ok(dot(u, body.generators().point(0)) + body.radius());
            }
            ascend(body, u, cfg)
        }
    }
}

/// Near-active band, relative to `r`, for the final KKT polish.
const POLISH_BAND: f64 = 0.05;
const POLISH_CANDIDATES: usize = 8;

/// Projected ascent, finished by a KKT polish on the near-active
/// constraints; the polished value is used only when certified.
fn ascend(body: &BallBody, u: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    let r = body.radius();
    let step = 2.0 * r;
    let mut z = body.center().to_vec();
    let mut value = dot(u, &z);
    let mut settled = false;
    for _ in 0..MAX_ASCENT_STEPS {
        let target = add_scaled(&z, step, u);
        let Projection::Point(next) = project_onto(body, &target, cfg)? else {
            return Err(Error::EmptyBody);
        };
        let next_value = dot(u, &next);
        let gain = next_value - value;
        z = next;
        value = value.max(next_value);
        if gain < cfg.feasibility_tolerance {
            settled = true;
            break;
        }
    }
    let centers: Vec<&[f64]> = body.generators().iter().collect();
    let problem = Problem {
        centers: &centers,
        radius: r,
        alpha: 0.0,
        q: &[],
        u,
    };
    match problem.polish_near(&z, POLISH_BAND * r, POLISH_CANDIDATES) {
        Some(best) => Ok(dot(u, &best)),
        None if settled => Ok(value),
        None => Err(Error::NoConvergence {
            iterations: MAX_ASCENT_STEPS,
            residual: f64::NAN,
        }),
    }
}

/// `V_1` from the mean width over `cfg.directions` random directions:
/// `V_1 = d·ω_d / (2·ω_{d-1}) · w̄`.
///
/// The reported error combines the spread of the sampled widths with the
/// resolution of the support solver (a few feasibility tolerances per
/// evaluation), so a body of constant width does not claim zero error.
pub fn v1_estimate(body: &BallBody, cfg: &EstimatorConfig) -> Result<Estimate> {
    cfg.validate()?;
    let d = body.dim();
    match body.status() {
        BodyStatus::Empty | BodyStatus::Point { .. } => return Ok(Estimate::exact(0.0, Method::Exact)),
        BodyStatus::FullDim => {}
    }
    let scale = d as f64 * omega(d) / (2.0 * omega(d - 1));
    let n = cfg.directions;
    let widths: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = shard_rng(cfg.seed, i as u64);
            let u = unit_vector(&mut rng, d);
            let minus: Vec<f64> = u.iter().map(|x| -x).collect();
            Ok(support_function(body, &u, cfg)? + support_function(body, &minus, cfg)?)
        })
        .collect::<Result<_>>()?;
    let mean = widths.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        widths.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let sampling = (var / n as f64).sqrt();
    let resolution = 20.0 * cfg.feasibility_tolerance * body.radius().max(1.0);
    Ok(Estimate {
        value: scale * mean,
        std_error: scale * sampling.hypot(resolution),
        samples_used: n,
        method: Method::MeanWidth,
        seed: cfg.seed,
        flagged: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ball_intrinsic_volume, dual, PointSet};

    fn lens() -> BallBody {
        dual(&PointSet::new(2, vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn support_of_ball() {
        let b = dual(&PointSet::single(&[1.0, 2.0, 3.0]).unwrap(), 0.5).unwrap();
        let u = [0.6, 0.0, 0.8];
        let h = support_function(&b, &u, &EstimatorConfig::default()).unwrap();
        assert!((h - (0.6 + 2.4 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn support_of_lens_top_is_vertex() {
        let h = support_function(&lens(), &[0.0, 1.0], &EstimatorConfig::default()).unwrap();
        assert!((h - 3f64.sqrt() / 2.0).abs() < 1e-7, "{h}");
        // along the axis the lens reaches 0.5 = -0.5 + 1
        let h = support_function(&lens(), &[1.0, 0.0], &EstimatorConfig::default()).unwrap();
        assert!((h - 0.5).abs() < 1e-7, "{h}");
    }

    #[test]
    fn support_of_point_and_empty() {
        let pt = dual(&PointSet::new(2, vec![vec![-1.0, 1.0], vec![1.0, 1.0]]).unwrap(), 1.0).unwrap();
        let h = support_function(&pt, &[0.0, 1.0], &EstimatorConfig::default()).unwrap();
        assert_eq!(h, 1.0);
        let empty = dual(&PointSet::new(2, vec![vec![-3.0, 0.0], vec![3.0, 0.0]]).unwrap(), 1.0).unwrap();
        assert_eq!(
            support_function(&empty, &[0.0, 1.0], &EstimatorConfig::default()),
            Err(Error::EmptyBody)
        );
        assert!(support_function(&lens(), &[0.0, 2.0], &EstimatorConfig::default()).is_err());
    }

    #[test]
    fn v1_of_three_ball_is_four_r() {
        let b = dual(&PointSet::single(&[0.0, 0.0, 0.0]).unwrap(), 1.25).unwrap();
        let est = v1_estimate(&b, &EstimatorConfig::default()).unwrap();
        let exact = ball_intrinsic_volume(3, 1, 1.25).unwrap();
        assert!((exact - 5.0).abs() < 1e-14);
        assert!((est.value - exact).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn v1_of_lens_matches_half_perimeter() {
        // lens with centre distance a = r = 1: two arcs of angle 2π/3, V_1 = 2π/3
        let b = dual(&PointSet::new(2, vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap(), 1.0).unwrap();
        let cfg = EstimatorConfig {
            directions: 512,
            seed: 4,
            ..Default::default()
        };
        let est = v1_estimate(&b, &cfg).unwrap();
        let exact = 2.0 * std::f64::consts::PI / 3.0;
        assert!((est.value - exact).abs() <= 3.0 * est.std_error, "{est:?} vs {exact}");
    }

    #[test]
    fn v1_is_deterministic() {
        let cfg = EstimatorConfig {
            directions: 64,
            seed: 99,
            ..Default::default()
        };
        let a = v1_estimate(&lens(), &cfg).unwrap();
        let b = v1_estimate(&lens(), &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
