use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Volume of the `d`-dimensional unit ball, `π^{d/2} / Γ(1 + d/2)`.
///
/// Evaluated with the recurrence `ω_d = 2π/d · ω_{d-2}` from `ω_0 = 1`,
/// `ω_1 = 2`, which stays accurate without a gamma function.
pub fn omega(d: usize) -> f64 {
    let (mut w, start) = if d.is_multiple_of(2) { (1.0, 2) } else { (2.0, 3) };
    let mut j = start;
    while j <= d {
        w *= 2.0 * PI / j as f64;
        j += 2;
    }
    w
}

/// Unit-ball volume for one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitBallConstants {
    pub dim: usize,
    pub omega: f64,
}

impl UnitBallConstants {
    pub fn new(dim: usize) -> Self {
        UnitBallConstants { dim, omega: omega(dim) }
    }

    /// `ω_{d-1} / ω_d`.
    pub fn ratio_to_lower(&self) -> f64 {
        if self.dim == 0 {
            return f64::NAN;
        }
        omega(self.dim - 1) / self.omega
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Constant `C(d,k)·ω_d/ω_{d-k}` so that `V_k(B^d_R) = flag · R^k`.
pub fn ball_intrinsic_volume_factor(d: usize, k: usize) -> Result<f64> {
    if d == 0 || k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={d}")));
    }
    Ok(binomial(d, k) * omega(d) / omega(d - k))
}

/// `V_k` of a `d`-ball of radius `radius`.
///
/// Empty bodies are not representable here: callers apply `V_k(∅) = 0`
/// before calling.
pub fn ball_intrinsic_volume(d: usize, k: usize, radius: f64) -> Result<f64> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} must be finite and nonnegative"
        )));
    }
    Ok(ball_intrinsic_volume_factor(d, k)? * radius.powi(k as i32))
}

/// Ball radius whose `V_k` equals `value`; inverse of [`ball_intrinsic_volume`].
pub fn ball_radius_for_intrinsic_volume(d: usize, k: usize, value: f64) -> Result<f64> {
    if !(value >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "V_k value {value} must be nonnegative"
        )));
    }
    Ok((value / ball_intrinsic_volume_factor(d, k)?).powf(1.0 / k as f64))
}
