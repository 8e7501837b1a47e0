//! Numerical estimates of intrinsic volumes of r-ball bodies, and the
//! projection machinery they rest on.
//!
//! All estimators are seeded. Sample loops are split into a fixed number of
//! shards, each driven by its own RNG stream derived from `(seed, shard)`,
//! so the merged result does not depend on how many threads run them.

mod kkt;
mod projection;
mod rng;
mod support;
mod volume;

use serde::{Deserialize, Serialize};

pub use projection::{find_common_point, project_onto, BallConstraint, Feasibility, Projection};
pub use rng::{shard_rng, uniform_in_ball, unit_vector};
pub use support::{support_function, v1_estimate};
pub use volume::{mc_volume, vk_estimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Monte Carlo sample budget (per volume, or in total across subspaces).
    pub samples: usize,
    pub seed: u64,
    pub confidence_z: f64,
    pub feasibility_tolerance: f64,
    pub max_projection_iters: usize,
    /// Directions for mean width, or subspaces for projection averaging.
    pub directions: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            samples: 100_000,
            seed: 0,
            confidence_z: 3.0,
            feasibility_tolerance: 1e-9,
            max_projection_iters: 10_000,
            directions: 256,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.samples == 0 || self.directions == 0 || self.max_projection_iters == 0 {
            return Err(crate::Error::InvalidParameter(
                "samples, directions and max_projection_iters must be positive".into(),
            ));
        }
        if !(self.feasibility_tolerance > 0.0) || !(self.confidence_z > 0.0) {
            return Err(crate::Error::InvalidParameter(
                "feasibility_tolerance and confidence_z must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        EstimatorConfig { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Closed form or degenerate body; `std_error` is zero.
    Exact,
    /// Exact planar arc-polygon kernel.
    ArcPolygon,
    /// Rejection sampling in an enclosing ball.
    MonteCarloVolume,
    /// Mean width from support functions in random directions.
    MeanWidth,
    /// Average volume of projections onto random subspaces.
    Kubota,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    #[serde(rename = "samples")]
    pub samples_used: usize,
    pub method: Method,
    pub seed: u64,
    /// Samples whose feasibility solve did not converge even after a retry.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub flagged: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl Estimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Estimate {
            value,
            std_error: 0.0,
            samples_used: 0,
            method,
            seed: 0,
            flagged: 0,
        }
    }

    /// Half-width of the `z`-sigma interval.
    pub fn margin(&self, z: f64) -> f64 {
        z * self.std_error
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Number of independent RNG shards used by every sampling loop.
pub const SHARDS: usize = 32;

/// Splits `total` work items over [`SHARDS`] shards; earlier shards take the remainder.
pub(crate) fn shard_sizes(total: usize) -> Vec<usize> {
    let base = total / SHARDS;
    let extra = total % SHARDS;
    (0..SHARDS).map(|i| base + usize::from(i < extra)).collect()
}
