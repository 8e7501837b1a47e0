//! Randomized suites that check the monotonicity inequalities and dual
//! identities, plus threshold tables, as reproducible record streams.

mod bsz;
mod identities;
mod kp;
mod record;
mod thresholds;

use std::path::PathBuf;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bsz::run_bsz_check;
pub use identities::run_identity_suite;
pub use kp::main_threshold;
pub use kp::run_kp_check;
pub use record::{judge_eq, judge_le, write_records_csv, write_records_json, Summary, TrialRecord, Verdict};
pub use thresholds::{run_threshold_sweep, CoverageRow, ThresholdRow, ThresholdSweep, COVERAGE_STEPS};

use crate::error::{Error, Result};
use crate::estimators::{shard_rng, vk_estimate, Estimate, EstimatorConfig, Method};
use crate::exact2d::disk_intersection;
use crate::geometry::{ball_intrinsic_volume, BallBody};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    BszCheck,
    KpCheck,
    IdentitySuite,
    ThresholdSweep,
    Render,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub dims: Vec<usize>,
    /// Empty means `{1, 2, d}` for each dimension.
    #[serde(default)]
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    /// Fixed point count; each suite picks its own when absent.
    #[serde(default)]
    pub n_points: Option<usize>,
    pub radius: f64,
    /// Fixed separating value; drawn per trial when absent.
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, dims: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentSpec {
            kind,
            dims,
            k_values: Vec::new(),
            trials,
            seed,
            estimator: EstimatorConfig::default(),
            n_points: None,
            radius: 1.0,
            lambda: None,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParameter(
                "dimensions must be listed and at least 2".into(),
            ));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "radius {} must be positive",
                self.radius
            )));
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::InvalidParameter(format!("λ = {l} must be positive")));
            }
        }
        if self.n_points == Some(0) {
            return Err(Error::InvalidParameter("n_points must be at least 1".into()));
        }
        if self.k_values.contains(&0) {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        self.estimator.validate()
    }

    /// The `k` values to test in dimension `d`, ascending and deduplicated.
    pub fn ks_for(&self, d: usize) -> Vec<usize> {
        let mut ks: Vec<usize> = if self.k_values.is_empty() {
            vec![1, 2, d]
        } else {
            self.k_values.iter().copied().filter(|&k| k <= d).collect()
        };
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

/// Per-trial seed, independent of scheduling. `salt` separates suites.
pub(crate) fn trial_seed(seed: u64, salt: u64, trial: usize) -> u64 {
    shard_rng(seed, (salt << 40) | trial as u64).random()
}

/// `(dim, trial)` jobs in emission order, numbered globally.
pub(crate) fn jobs(spec: &ExperimentSpec) -> Vec<(usize, usize, usize)> {
    spec.dims
        .iter()
        .flat_map(|&d| (0..spec.trials).map(move |t| (d, t)))
        .enumerate()
        .map(|(i, (d, t))| (i, d, t))
        .collect()
}

/// `V_k` of a body: exact arc-polygon evaluation in the plane, estimators
/// otherwise.
pub fn body_intrinsic_volume(body: &BallBody, k: usize, cfg: &EstimatorConfig) -> Result<Estimate> {
    if body.dim() != 2 {
        return vk_estimate(body, k, cfg);
    }
    if k == 0 || k > 2 {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..=2")));
    }
    if body.is_empty() {
        return Ok(Estimate::exact(0.0, Method::Exact));
    }
    let poly = disk_intersection(body.generators(), body.radius())?;
    let value = if k == 2 { poly.area() } else { poly.v1() };
    Ok(Estimate::exact(value, Method::ArcPolygon))
}

/// Closed-form `V_k` of `B[·, radius]`, zero for a nonpositive radius.
pub(crate) fn ball_vk(d: usize, k: usize, radius: f64) -> Result<Estimate> {
    let value = if radius > 0.0 {
        ball_intrinsic_volume(d, k, radius)?
    } else {
        0.0
    };
    Ok(Estimate::exact(value, Method::Exact))
}

/// Rounding allowance for a comparison of exact quantities of size `scale`.
pub(crate) fn exact_tolerance(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}
