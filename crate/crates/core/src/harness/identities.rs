use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;

use super::{jobs, judge_eq, trial_seed, ExperimentSpec, TrialRecord, Verdict};
use crate::error::{Error, Result};
use crate::estimators::{shard_rng, support_function, uniform_in_ball, Estimate, Method};
use crate::exact2d::{disk_intersection, spindle_hull_2d};
use crate::geometry::vector::dist;
use crate::geometry::{dual, dual_of_ball_union, BallBody, PointSet};

const SALT: u64 = 3;
const MEMBERSHIP_SAMPLES: usize = 1000;
const WIDTH_DIRECTIONS: usize = 64;
const SUPPORT_DIRECTIONS: usize = 16;

/// Exact identities of the dual operation. Planar trials add the perimeter
/// identity for a set and its ball hull, constant width of `A + A^r`,
/// idempotence of the triple dual, and agreement between the iterative and
/// exact support functions. Every dimension checks the union identity,
/// anti-monotonicity and the dual of a union of balls by membership.
pub fn run_identity_suite(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let rows: Result<Vec<Vec<TrialRecord>>> = jobs(spec)
        .into_par_iter()
        .map(|(index, d, _)| identity_trial(spec, index, d))
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

struct Ctx<'a> {
    spec: &'a ExperimentSpec,
    index: usize,
    dim: usize,
    seed: u64,
}

impl Ctx<'_> {
    fn record(&self, suite: &str, n: usize, lhs: f64, rhs: f64, tolerance: f64) -> TrialRecord {
        let lhs = Estimate::exact(lhs, Method::Exact);
        let rhs = Estimate::exact(rhs, Method::Exact);
        let (margin, noise, verdict) = judge_eq(&lhs, &rhs, self.spec.estimator.confidence_z, tolerance);
        TrialRecord {
            trial: self.index,
            suite: suite.into(),
            dim: self.dim,
            k: None,
            n_points: n,
            radius: self.spec.radius,
            lambda: None,
            seed: self.seed,
            lhs,
            rhs,
            margin,
            noise,
            tolerance,
            verdict,
            case: None,
            certified: None,
            observational: false,
            note: None,
        }
    }
}

fn random_set<R: Rng>(rng: &mut R, d: usize, n: usize, spread: f64) -> Result<PointSet> {
    let origin = vec![0.0; d];
    PointSet::from_flat(d, (0..n).flat_map(|_| uniform_in_ball(rng, &origin, spread)).collect())
}

fn identity_trial(spec: &ExperimentSpec, index: usize, d: usize) -> Result<Vec<TrialRecord>> {
    let seed = trial_seed(spec.seed, SALT, index);
    let ctx = Ctx {
        spec,
        index,
        dim: d,
        seed,
    };
    let mut rng = shard_rng(seed, u64::MAX);
    let r = spec.radius;
    let mut out = Vec::new();
    if d == 2 {
        let n = spec.n_points.unwrap_or_else(|| rng.random_range(5..=30));
        let spread = r * rng.random_range(0.2..0.95);
        let p = random_set(&mut rng, 2, n, spread)?;
        out.extend(planar_checks(&ctx, &p, &mut rng)?);
    }
    let n = spec.n_points.unwrap_or_else(|| rng.random_range(2..=10));
    let x = random_set(&mut rng, d, n, 0.8 * r)?;
    let m = rng.random_range(1..=n);
    let y = random_set(&mut rng, d, m, 0.8 * r)?;
    out.push(union_check(&ctx, &x, &y, &mut rng)?);
    out.push(anti_monotone_check(&ctx, &x, &y, &mut rng)?);
    let rho = r * rng.random_range(0.01..0.3);
    out.push(ball_union_check(&ctx, &x, rho, &mut rng)?);
    Ok(out)
}

fn planar_checks<R: Rng>(ctx: &Ctx<'_>, p: &PointSet, rng: &mut R) -> Result<Vec<TrialRecord>> {
    let r = ctx.spec.radius;
    let n = p.len();
    let body = disk_intersection(p, r)?;
    let hull = spindle_hull_2d(p, r)?;
    let mut out = Vec::new();

    out.push(ctx.record("perimeter_identity", n, hull.v1() + body.v1(), PI * r, 1e-7 * r));

    let phase = rng.random_range(0.0..TAU);
    let mut worst_width = 0.0f64;
    for i in 0..WIDTH_DIRECTIONS {
        let t = phase + TAU * i as f64 / WIDTH_DIRECTIONS as f64;
        let u = [t.cos(), t.sin()];
        let w = hull.width(u).ok_or(Error::EmptyBody)? + body.width(u).ok_or(Error::EmptyBody)?;
        worst_width = worst_width.max((w - 2.0 * r).abs());
    }
    out.push(ctx.record("constant_width", n, worst_width, 0.0, 1e-7 * r));

    let boundary = hull.sample_boundary(8);
    let coords: Vec<f64> = boundary.iter().flat_map(|q| q.iter().copied()).collect();
    let triple = disk_intersection(&PointSet::from_flat(2, coords)?, r)?;
    let gap = triple.hausdorff(&body, 256).ok_or(Error::EmptyBody)?;
    out.push(ctx.record("idempotence", n, gap, 0.0, 1e-6 * r));

    let solid = dual(p, r)?;
    let cfg = ctx.spec.estimator.with_seed(ctx.seed);
    let mut worst_support = 0.0f64;
    for _ in 0..SUPPORT_DIRECTIONS {
        let t = rng.random_range(0.0..TAU);
        let (c, s) = (t.cos(), t.sin());
        let exact = body.support([c, s]).ok_or(Error::EmptyBody)?;
        let iterative = match support_function(&solid, &[c, s], &cfg) {
            Ok(h) => h,
            Err(Error::NoConvergence { .. }) => {
                let mut rec = ctx.record("support_agreement", n, f64::NAN, exact, 1e-6 * r);
                rec.verdict = Verdict::Invalid;
                return Ok(out.into_iter().chain([rec]).collect());
            }
            Err(e) => return Err(e),
        };
        worst_support = worst_support.max((iterative - exact).abs());
    }
    out.push(ctx.record("support_agreement", n, worst_support, 0.0, 1e-6 * r));
    Ok(out)
}

/// Membership samples covering `B[0, 2r]`, which contains every body used here.
fn probes<R: Rng>(rng: &mut R, d: usize, r: f64) -> Vec<Vec<f64>> {
    let origin = vec![0.0; d];
    (0..MEMBERSHIP_SAMPLES)
        .map(|_| uniform_in_ball(rng, &origin, 2.0 * r))
        .collect()
}

fn union_check<R: Rng>(ctx: &Ctx<'_>, x: &PointSet, y: &PointSet, rng: &mut R) -> Result<TrialRecord> {
    let r = ctx.spec.radius;
    let both = dual(&x.union(y)?, r)?;
    let (bx, by) = (dual(x, r)?, dual(y, r)?);
    let mismatches = probes(rng, ctx.dim, r)
        .iter()
        .filter(|q| both.contains_unchecked(q) != (bx.contains_unchecked(q) && by.contains_unchecked(q)))
        .count();
    Ok(ctx.record("union_identity", x.len() + y.len(), mismatches as f64, 0.0, 0.0))
}

fn members<R: Rng>(body: &BallBody, rng: &mut R, count: usize) -> Vec<Vec<f64>> {
    if body.is_empty() {
        return Vec::new();
    }
    let mut found = Vec::new();
    for _ in 0..count * 50 {
        let q = uniform_in_ball(rng, body.center(), body.radius());
        if body.contains_unchecked(&q) {
            found.push(q);
            if found.len() == count {
                break;
            }
        }
    }
    found
}

fn anti_monotone_check<R: Rng>(ctx: &Ctx<'_>, x: &PointSet, extra: &PointSet, rng: &mut R) -> Result<TrialRecord> {
    let r = ctx.spec.radius;
    let larger = dual(&x.union(extra)?, r)?;
    let smaller = dual(x, r)?;
    let mut samples = members(&larger, rng, MEMBERSHIP_SAMPLES / 2);
    samples.extend(probes(rng, ctx.dim, r).into_iter().take(MEMBERSHIP_SAMPLES / 2));
    let escapes = samples
        .iter()
        .filter(|q| larger.contains_unchecked(q) && !smaller.contains_unchecked(q))
        .count();
    Ok(ctx.record("anti_monotone", x.len() + extra.len(), escapes as f64, 0.0, 0.0))
}

/// Compares the library's dual of `⋃ B[x_i, ρ]` against the direct test
/// `max_i |q − x_i| + ρ ≤ r`. Probes within `1e-12` of the boundary are skipped.
fn ball_union_check<R: Rng>(ctx: &Ctx<'_>, x: &PointSet, rho: f64, rng: &mut R) -> Result<TrialRecord> {
    let r = ctx.spec.radius;
    let body = dual_of_ball_union(x, rho, r)?.body;
    let mut samples = members(&dual(x, r - rho)?, rng, MEMBERSHIP_SAMPLES / 2);
    samples.extend(probes(rng, ctx.dim, r).into_iter().take(MEMBERSHIP_SAMPLES / 2));
    let mut mismatches = 0usize;
    for q in &samples {
        let reach = x.iter().map(|c| dist(q, c) + rho).fold(f64::NEG_INFINITY, f64::max);
        if (reach - r).abs() < 1e-12 * r.max(1.0) {
            continue;
        }
        if (reach <= r) != body.contains_unchecked(q) {
            mismatches += 1;
        }
    }
    Ok(ctx.record("ball_union_dual", x.len(), mismatches as f64, 0.0, 0.0))
}
