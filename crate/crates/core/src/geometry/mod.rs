//! Dimension-generic point sets, r-ball bodies and their algebra.

mod body;
mod constants;
mod hull;
mod meb;
mod point_set;
pub mod vector;

pub use body::{dual, dual_of_ball_union, BallBody, BodyStatus, UnionDual, POINT_TOL};
pub use constants::{
    ball_intrinsic_volume, ball_intrinsic_volume_factor, ball_radius_for_intrinsic_volume, binomial, omega,
    UnitBallConstants,
};
pub use hull::{ball_hull_membership, HullMembership};
pub use meb::{circumball, circumradius, circumradius_of, circumradius_seeded, EnclosingBall, DEFAULT_MEB_SEED};
pub use point_set::PointSet;
