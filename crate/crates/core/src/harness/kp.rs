use rand::Rng;
use rayon::prelude::*;

use super::{body_intrinsic_volume, exact_tolerance, jobs, judge_le, trial_seed, ExperimentSpec, TrialRecord, Verdict};
use crate::contraction::{
    bound_chain, is_uniform_contraction, sample_clustered, sample_separated, threshold_n, BoundCase, ThresholdMode,
    SAUSAGE_MIN_DIM,
};
use crate::error::{Error, Result};
use crate::estimators::{shard_rng, Estimate, Method};
use crate::geometry::{dual, BodyStatus};

const SALT: u64 = 2;

/// Smallest `N` the main theorem covers in dimension `d`.
pub fn main_threshold(d: usize) -> Result<u64> {
    let mode = if d >= SAUSAGE_MIN_DIM {
        ThresholdMode::MainIi
    } else {
        ThresholdMode::MainI
    };
    Ok(threshold_n(d, mode)?.minimal_n as u64)
}

/// `V_k(P^r) ≤ V_k(Q^r)` for a `λ`-separated `P` and a `λ`-cluster `Q`.
///
/// Without a fixed `n_points`, `N` is the main threshold, except every
/// fourth trial which sits one below it. Without a fixed `λ`, `λ/r` is drawn
/// from `[0.1, 2.2]`. Rows the bound chain does not cover are observational.
pub fn run_kp_check(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let rows: Result<Vec<Vec<TrialRecord>>> = jobs(spec)
        .into_par_iter()
        .map(|(index, d, t)| kp_trial(spec, index, d, t))
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn kp_trial(spec: &ExperimentSpec, index: usize, d: usize, t: usize) -> Result<Vec<TrialRecord>> {
    let seed = trial_seed(spec.seed, SALT, index);
    let mut rng = shard_rng(seed, u64::MAX);
    let r = spec.radius;
    let n = match spec.n_points {
        Some(n) => n,
        None => {
            let top = main_threshold(d)?;
            let n = if t % 4 == 3 { top - 1 } else { top };
            usize::try_from(n).map_err(|_| Error::InvalidParameter(format!("threshold {n} too large to sample")))?
        }
    };
    let lambda = spec.lambda.unwrap_or_else(|| r * rng.random_range(0.1..2.2));
    let p = sample_separated(d, n, lambda, seed)?;
    let q = sample_clustered(d, n, lambda, seed)?;
    if !is_uniform_contraction(&p, &q, lambda)? {
        return Err(Error::InvalidParameter(format!(
            "generated pair is not a uniform contraction at λ = {lambda}"
        )));
    }
    let p_body = dual(&p, r)?;
    let q_body = dual(&q, r)?;
    let cfg = spec.estimator.with_seed(seed);
    let p_collapsed = matches!(p_body.status(), BodyStatus::Empty | BodyStatus::Point { .. });
    spec.ks_for(d)
        .into_iter()
        .map(|k| {
            let report = bound_chain(d, n as u64, lambda, r, k)?;
            let covered = report.case != BoundCase::NotCovered;
            let base = TrialRecord {
                trial: index,
                suite: "kp".into(),
                dim: d,
                k: Some(k),
                n_points: n,
                radius: r,
                lambda: Some(lambda),
                seed,
                lhs: Estimate::exact(f64::NAN, Method::Exact),
                rhs: Estimate::exact(f64::NAN, Method::Exact),
                margin: f64::NAN,
                noise: 0.0,
                tolerance: 0.0,
                verdict: Verdict::Invalid,
                case: Some(report.case),
                certified: covered.then(|| report.certified()),
                observational: !covered,
                note: None,
            };
            let (lhs, rhs) = match (
                body_intrinsic_volume(&p_body, k, &cfg),
                body_intrinsic_volume(&q_body, k, &cfg.with_seed(cfg.seed ^ 0x9e37_79b9)),
            ) {
                (Ok(l), Ok(rr)) => (l, rr),
                (Err(Error::NoConvergence { iterations, residual }), _)
                | (_, Err(Error::NoConvergence { iterations, residual })) => {
                    return Ok(TrialRecord {
                        note: Some(format!(
                            "no convergence after {iterations} iterations, residual {residual:e}"
                        )),
                        ..base
                    })
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            let tolerance = exact_tolerance(rhs.value.max(report.f_lower));
            let (margin, noise, mut verdict) = judge_le(&lhs, &rhs, cfg.confidence_z, tolerance);
            let mut notes = Vec::new();
            if covered && !report.certified() {
                notes.push("bound chain does not certify its own case".to_string());
            }
            if (report.case.is_packing() || report.case == BoundCase::TrivialEmpty) && !p_collapsed {
                notes.push(format!("case {} but P^r is full-dimensional", report.case.as_str()));
            }
            if report.case.is_jung() {
                let z = cfg.confidence_z;
                if report.f_lower - rhs.value > z * rhs.std_error + tolerance {
                    notes.push(format!(
                        "V_k(Q^r) = {:e} below the Jung lower bound {:e}",
                        rhs.value, report.f_lower
                    ));
                }
                if lhs.value - report.g_upper > z * lhs.std_error + tolerance {
                    notes.push(format!(
                        "V_k(P^r) = {:e} above the packing upper bound {:e}",
                        lhs.value, report.g_upper
                    ));
                }
            }
            if !notes.is_empty() && !base.observational {
                verdict = Verdict::Violation;
            }
            Ok(TrialRecord {
                lhs,
                rhs,
                margin,
                noise,
                tolerance,
                verdict,
                note: (!notes.is_empty()).then(|| notes.join("; ")),
                ..base
            })
        })
        .collect()
}
