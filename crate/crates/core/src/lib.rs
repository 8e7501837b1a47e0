//! Intersections of congruent balls (r-ball bodies), their ball hulls and
//! circumradii, intrinsic volume estimation, and the closed-form bounds used
//! to study volume monotonicity of ball intersections under uniform
//! contractions of the centers.
//!
//! The crate is split into:
//!
//! * [`geometry`]: point sets, the r-ball body operator, minimal enclosing
//!   balls and hull membership in any dimension.
//! * [`exact2d`]: exact planar kernel built on arc polygons.
//! * [`estimators`]: Monte Carlo and projection based estimates of `V_k`.
//! * [`contraction`]: contraction predicates, instance generators and the
//!   threshold / bound formulas.
//! * [`harness`]: randomized verification suites and report emission used by
//!   the `ballbody` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contraction;
pub mod error;
pub mod estimators;
pub mod exact2d;
pub mod geometry;
pub mod harness;

pub use error::{Error, Result};
pub use geometry::{BallBody, BodyStatus, PointSet};
