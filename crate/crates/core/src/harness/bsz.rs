use rand::Rng;
use rayon::prelude::*;

use super::{
    ball_vk, body_intrinsic_volume, exact_tolerance, jobs, judge_le, trial_seed, ExperimentSpec, TrialRecord, Verdict,
};
use crate::contraction::{equivalent_radius_mu, sample_separated};
use crate::error::{Error, Result};
use crate::estimators::{shard_rng, Estimate};
use crate::geometry::dual_of_ball_union;

const SALT: u64 = 1;
const DEFAULT_MAX_BALLS: usize = 12;

/// `V_k(A^r) ≤ V_k(B^r)` where `A` is a union of `N` disjoint `ρ`-balls and
/// `B` the ball of the same volume, radius `N^{1/d}ρ`. Trial 0 of each
/// dimension uses a single ball, where equality holds.
pub fn run_bsz_check(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let rows: Result<Vec<Vec<TrialRecord>>> = jobs(spec)
        .into_par_iter()
        .map(|(index, d, t)| bsz_trial(spec, index, d, t))
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn bsz_trial(spec: &ExperimentSpec, index: usize, d: usize, t: usize) -> Result<Vec<TrialRecord>> {
    let seed = trial_seed(spec.seed, SALT, index);
    let mut rng = shard_rng(seed, u64::MAX);
    let r = spec.radius;
    let n = match (spec.n_points, t) {
        (Some(n), _) => n,
        (None, 0) => 1,
        (None, _) => rng.random_range(1..=DEFAULT_MAX_BALLS),
    };
    let rho = r * rng.random_range(0.02..0.12);
    let centers = sample_separated(d, n, 2.0 * rho, seed)?;
    let body = dual_of_ball_union(&centers, rho, r)?.body;
    let equal_volume_radius = equivalent_radius_mu(d, n as u64, 2.0 * rho);
    let cfg = spec.estimator.with_seed(seed);
    spec.ks_for(d)
        .into_iter()
        .map(|k| {
            let rhs = ball_vk(d, k, r - equal_volume_radius)?;
            let base = TrialRecord {
                trial: index,
                suite: "bsz".into(),
                dim: d,
                k: Some(k),
                n_points: n,
                radius: r,
                lambda: Some(2.0 * rho),
                seed,
                lhs: Estimate::exact(f64::NAN, crate::estimators::Method::Exact),
                rhs: rhs.clone(),
                margin: f64::NAN,
                noise: 0.0,
                tolerance: exact_tolerance(rhs.value),
                verdict: Verdict::Invalid,
                case: None,
                certified: None,
                observational: false,
                note: None,
            };
            match body_intrinsic_volume(&body, k, &cfg) {
                Ok(lhs) => {
                    let (margin, noise, verdict) = judge_le(&lhs, &rhs, cfg.confidence_z, base.tolerance);
                    Ok(TrialRecord {
                        lhs,
                        margin,
                        noise,
                        verdict,
                        ..base
                    })
                }
                Err(Error::NoConvergence { iterations, residual }) => Ok(TrialRecord {
                    note: Some(format!(
                        "no convergence after {iterations} iterations, residual {residual:e}"
                    )),
                    ..base
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}
