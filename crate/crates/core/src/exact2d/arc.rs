use std::f64::consts::TAU;

use serde::Serialize;

/// Maps an angle to `[0, 2π)`.
pub fn canonical_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise circular arc from angle `start` over `sweep` radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc2 {
    pub center: [f64; 2],
    pub radius: f64,
    /// In `[0, 2π)`.
    pub start: f64,
    /// In `(0, 2π]`.
    pub sweep: f64,
}

impl Arc2 {
    pub fn full(center: [f64; 2], radius: f64) -> Self {
        Arc2 {
            center,
            radius,
            start: 0.0,
            sweep: TAU,
        }
    }

    pub fn end(&self) -> f64 {
        self.start + self.sweep
    }

    /// Point at fraction `t ∈ [0, 1]` of the sweep.
    pub fn point_at(&self, t: f64) -> [f64; 2] {
        let a = self.start + t * self.sweep;
        [
            self.center[0] + self.radius * a.cos(),
            self.center[1] + self.radius * a.sin(),
        ]
    }

    pub fn start_point(&self) -> [f64; 2] {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> [f64; 2] {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep
    }

    /// Whether direction `theta` (canonical) lies within the arc's sweep.
    pub fn contains_angle(&self, theta: f64) -> bool {
        canonical_angle(theta - self.start) <= self.sweep
    }
}
