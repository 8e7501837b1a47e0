//! Membership in the r-ball convex hull `conv_r P = (P^r)^r`.

use serde::Serialize;

use super::body::{dual, BallBody, BodyStatus};
use super::point_set::PointSet;
use super::vector::{add_scaled, dist, lerp, normalized};
use crate::error::{Error, Result};
use crate::estimators::{project_onto, shard_rng, unit_vector, EstimatorConfig, Projection};

const ASCENT_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HullMembership {
    /// `certificate` is an exact member of `P^r` farther than `r` from the
    /// query, which proves the query is outside the hull.
    Outside { certificate: Vec<f64>, distance: f64 },
    /// No point of `P^r` farther than `r` was found.
    InsideUpToConfidence { farthest_found: f64 },
}

/// Decides whether `q` lies in `conv_r P`.
///
/// `q ∉ conv_r P` exactly when some `z ∈ P^r` has `|z − q| > r`; such a `z`
/// is searched for by multi-start projected ascent of `|z − q|` over `P^r`.
pub fn ball_hull_membership(
    points: &PointSet,
    radius: f64,
    q: &[f64],
    cfg: &EstimatorConfig,
) -> Result<HullMembership> {
    let body = dual(points, radius)?;
    if q.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: q.len(),
        });
    }
    let margin = 1e-9 * radius.max(1.0);
    match body.status() {
        BodyStatus::Empty => Err(Error::HullEmpty {
            circumradius: body.generator_ball().radius,
            radius,
        }),
        BodyStatus::Point { witness } => {
            // the hull is the whole ball B[witness, r]
            let distance = dist(witness, q);
            if distance > radius + margin {
                Ok(HullMembership::Outside {
                    certificate: witness.clone(),
                    distance,
                })
            } else {
                Ok(HullMembership::InsideUpToConfidence {
                    farthest_found: distance,
                })
            }
        }
        BodyStatus::FullDim => farthest_search(&body, q, margin, cfg),
    }
}

fn farthest_search(body: &BallBody, q: &[f64], margin: f64, cfg: &EstimatorConfig) -> Result<HullMembership> {
    let d = body.dim();
    let r = body.radius();
    let center = body.center().to_vec();
    let mut rng = shard_rng(cfg.seed, 0);
    let starts = (4 * d).max(16);

    let mut directions = Vec::with_capacity(starts + 1);
    if let Some(away) = normalized(&super::vector::sub(&center, q)) {
        directions.push(away);
    }
    while directions.len() <= starts {
        directions.push(unit_vector(&mut rng, d));
    }

    let mut best = f64::NEG_INFINITY;
    for u in directions {
        let Projection::Point(mut z) = project_onto(body, &add_scaled(&center, 2.0 * r, &u), cfg)? else {
            return Err(Error::EmptyBody);
        };
        let mut value = dist(&z, q);
        for _ in 0..ASCENT_STEPS {
            let Some(dir) = normalized(&super::vector::sub(&z, q)) else {
                break;
            };
            let Projection::Point(next) = project_onto(body, &add_scaled(&z, 2.0 * r, &dir), cfg)? else {
                return Err(Error::EmptyBody);
            };
            let next_value = dist(&next, q);
            let gain = next_value - value;
            if next_value > value {
                z = next;
                value = next_value;
            }
            if gain < cfg.feasibility_tolerance {
                break;
            }
        }
        best = best.max(value);
        if value > r + margin {
            if let Some(cert) = certify(body, &z, &center) {
                let distance = dist(&cert, q);
                if distance > r + margin {
                    return Ok(HullMembership::Outside {
                        certificate: cert,
                        distance,
                    });
                }
            }
        }
    }
    Ok(HullMembership::InsideUpToConfidence { farthest_found: best })
}

/// Pulls a near-member toward the interior until it is an exact member.
fn certify(body: &BallBody, z: &[f64], interior: &[f64]) -> Option<Vec<f64>> {
    if body.contains_unchecked(z) {
        return Some(z.to_vec());
    }
    let mut t = 1e-12;
    while t <= 1e-2 {
        let cand = lerp(z, interior, t);
        if body.contains_unchecked(&cand) {
            return Some(cand);
        }
        t *= 10.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EstimatorConfig {
        EstimatorConfig::default()
    }

    #[test]
    fn generators_are_inside() {
        let p = PointSet::new(2, vec![vec![-0.5, 0.0], vec![0.5, 0.0], vec![0.1, 0.4]]).unwrap();
        for q in p.iter() {
            assert!(matches!(
                ball_hull_membership(&p, 1.0, q, &cfg()).unwrap(),
                HullMembership::InsideUpToConfidence { .. }
            ));
        }
    }

    #[test]
    fn point_above_spindle_is_outside() {
        let p = PointSet::new(2, vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap();
        let body = dual(&p, 1.0).unwrap();
        match ball_hull_membership(&p, 1.0, &[0.0, 0.9], &cfg()).unwrap() {
            HullMembership::Outside { certificate, distance } => {
                assert!(body.contains(&certificate).unwrap());
                assert!(distance > 1.0);
                assert!(certificate[1] < -0.7, "{certificate:?}");
            }
            other => panic!("{other:?}"),
        }
        // the spindle of two points at distance 1 with r = 1 bulges to
        // height 1 − √3/2 ≈ 0.134 at the middle
        assert!(matches!(
            ball_hull_membership(&p, 1.0, &[0.0, 0.12], &cfg()).unwrap(),
            HullMembership::InsideUpToConfidence { .. }
        ));
        assert!(matches!(
            ball_hull_membership(&p, 1.0, &[0.0, 0.15], &cfg()).unwrap(),
            HullMembership::Outside { .. }
        ));
    }

    #[test]
    fn hull_of_single_point_is_the_point() {
        let p = PointSet::single(&[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            ball_hull_membership(&p, 2.0, &[1.0, 1.0, 1.001], &cfg()).unwrap(),
            HullMembership::Outside { .. }
        ));
        assert!(matches!(
            ball_hull_membership(&p, 2.0, &[1.0, 1.0, 1.0], &cfg()).unwrap(),
            HullMembership::InsideUpToConfidence { .. }
        ));
    }

    #[test]
    fn empty_dual_is_an_error() {
        let p = PointSet::new(2, vec![vec![-2.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(
            ball_hull_membership(&p, 1.0, &[0.0, 0.0], &cfg()),
            Err(Error::HullEmpty { .. })
        ));
    }

    #[test]
    fn point_dual_gives_full_ball_hull() {
        let p = PointSet::new(2, vec![vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            ball_hull_membership(&p, 1.0, &[0.0, 0.99], &cfg()).unwrap(),
            HullMembership::InsideUpToConfidence { .. }
        ));
        assert!(matches!(
            ball_hull_membership(&p, 1.0, &[0.0, 1.01], &cfg()).unwrap(),
            HullMembership::Outside { .. }
        ));
    }
}
