//! Projections onto intersections of balls.

use super::kkt::Problem;
use super::EstimatorConfig;
use crate::error::{Error, Result};
use crate::geometry::vector::{dist, dist_sq};
use crate::geometry::{BallBody, BodyStatus};

/// One ball constraint `|z − center| ≤ radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallConstraint {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Point(Vec<f64>),
    /// The body is empty.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    Infeasible,
    NoConvergence,
}

const POLISH_EVERY: usize = 16;
const POLISH_CANDIDATES: usize = 8;

#[inline]
fn project_ball_into(y: &[f64], center: &[f64], radius: f64, out: &mut [f64]) {
    let d2 = dist_sq(y, center);
    if d2 <= radius * radius {
        out.copy_from_slice(y);
    } else {
        let s = radius / d2.sqrt();
        for k in 0..y.len() {
            out[k] = center[k] + s * (y[k] - center[k]);
        }
    }
}

/// Euclidean projection of `q` onto the body by Dykstra's algorithm.
///
/// Converged when one full sweep moves the iterate by less than the
/// feasibility tolerance and every constraint holds to within ten times it.
/// Periodically, and at convergence, the constraints with nonzero correction
/// terms are taken as the active set and the KKT system is solved on them
/// by Newton's method; a solution passing the KKT test is the exact
/// projection and is returned at once.
pub fn project_onto(body: &BallBody, q: &[f64], cfg: &EstimatorConfig) -> Result<Projection> {
    if q.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: q.len(),
        });
    }
    match body.status() {
        BodyStatus::Empty => return Ok(Projection::Infeasible),
        BodyStatus::Point { witness } => return Ok(Projection::Point(witness.clone())),
        BodyStatus::FullDim => {}
    }
    if body.contains_unchecked(q) {
        return Ok(Projection::Point(q.to_vec()));
    }
    let centers: Vec<&[f64]> = body.generators().iter().collect();
    dykstra(
        &centers,
        body.radius(),
        q,
        cfg.feasibility_tolerance,
        cfg.max_projection_iters,
    )
    .map(Projection::Point)
}

fn dykstra(centers: &[&[f64]], radius: f64, q: &[f64], tol: f64, max_iters: usize) -> Result<Vec<f64>> {
    let dim = q.len();
    let m = centers.len();
    let mut x = q.to_vec();
    let mut next = vec![0.0; dim];
    let mut y = vec![0.0; dim];
    let mut prev = vec![0.0; dim];
    let mut incr = vec![0.0; m * dim];
    let mut violation = f64::INFINITY;
    let polish = |x: &[f64], incr: &[f64]| {
        let mut active: Vec<(f64, usize)> = (0..m)
            .map(|i| (incr[i * dim..(i + 1) * dim].iter().map(|v| v * v).sum::<f64>(), i))
            .filter(|&(size, _)| size > 0.0)
            .collect();
        active.sort_by(|a, b| b.0.total_cmp(&a.0));
        active.truncate(POLISH_CANDIDATES);
        let cand: Vec<usize> = active.into_iter().map(|(_, i)| i).collect();
        Problem {
            centers,
            radius,
            alpha: 1.0,
            q,
            u: &[],
        }
        .polish_subsets(x, &cand)
    };
    for sweep in 0..max_iters {
        prev.copy_from_slice(&x);
        for (i, c) in centers.iter().enumerate() {
            let inc = &mut incr[i * dim..(i + 1) * dim];
            for k in 0..dim {
                y[k] = x[k] + inc[k];
            }
            project_ball_into(&y, c, radius, &mut next);
            for k in 0..dim {
                inc[k] = y[k] - next[k];
            }
            x.copy_from_slice(&next);
        }
        if dist(&prev, &x) < tol {
            violation = centers
                .iter()
                .map(|c| dist(&x, c) - radius)
                .fold(f64::NEG_INFINITY, f64::max);
            if violation <= 10.0 * tol {
                return Ok(polish(&x, &incr).unwrap_or(x));
            }
        }
        if sweep % POLISH_EVERY == POLISH_EVERY - 1 {
            if let Some(z) = polish(&x, &incr) {
                return Ok(z);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        residual: violation,
    })
}

/// Finds some point common to all `balls` by cyclic projections, starting
/// from `start`.
///
/// A point is accepted when it violates no constraint by more than `tol`.
/// The problem is declared infeasible when two balls are disjoint, or when
/// the iteration settles into a cycle: a full sweep of projections moves the
/// iterate a lot in total but returns it to where it started.
pub fn find_common_point(balls: &[BallConstraint], start: &[f64], tol: f64, max_iters: usize) -> Feasibility {
    for (i, a) in balls.iter().enumerate() {
        if a.radius < 0.0 {
            return Feasibility::Infeasible;
        }
        for b in &balls[i + 1..] {
            let gap = a.radius + b.radius;
            if dist_sq(&a.center, &b.center) > gap * gap {
                return Feasibility::Infeasible;
            }
        }
    }
    let dim = start.len();
    let mut x = start.to_vec();
    let mut next = vec![0.0; dim];
    let mut prev = vec![0.0; dim];
    for _ in 0..max_iters {
        let worst = balls
            .iter()
            .map(|b| dist(&x, &b.center) - b.radius)
            .fold(f64::NEG_INFINITY, f64::max);
        if worst <= tol {
            return Feasibility::Feasible(x);
        }
        prev.copy_from_slice(&x);
        let mut travelled = 0.0;
        for b in balls {
            project_ball_into(&x, &b.center, b.radius, &mut next);
            travelled += dist(&x, &next);
            x.copy_from_slice(&next);
        }
        if travelled > tol && dist(&prev, &x) < 1e-6 * travelled {
            return Feasibility::Infeasible;
        }
    }
    Feasibility::NoConvergence
}
