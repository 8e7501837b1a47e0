//! Exact planar kernel: intersections of congruent disks and their ball
//! hulls as arc polygons.

mod arc;
mod svg;

use std::f64::consts::{PI, TAU};

use serde::Serialize;

pub use arc::{canonical_angle, Arc2};
pub use svg::{render_scene, render_svg, SvgLayer, SvgStyle};

use crate::error::{Error, Result};
use crate::geometry::{circumradius, PointSet, POINT_TOL};

/// Arcs shorter than this (radians) are dropped and their endpoints merged.
pub const MIN_ARC_SWEEP: f64 = 1e-12;

/// Boundary of a planar congruent-disk intersection (or of a ball hull),
/// traversed counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcPolygon2D {
    Empty,
    SinglePoint {
        point: [f64; 2],
    },
    /// Cyclic arc list; arc `k` ends where arc `k + 1` starts.
    Arcs {
        arcs: Vec<Arc2>,
    },
}

fn planar(points: &PointSet) -> Result<Vec<[f64; 2]>> {
    if points.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: points.dim(),
        });
    }
    Ok(points.iter().map(|p| [p[0], p[1]]).collect())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radius {r} must be positive and finite"
        )));
    }
    Ok(())
}

/// Intersection of `[start, start + sweep]` with `[b, b + lb]` on the circle,
/// as `(start, sweep)`; `None` if empty. When the overlap has two pieces
/// (only possible if the sweeps add up to at least 2π) the longer one wins.
fn intersect_intervals(start: f64, sweep: f64, b: f64, lb: f64) -> Option<(f64, f64)> {
    let off = canonical_angle(b - start);
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |lo: f64, hi: f64| {
        let lo = lo.max(0.0);
        let hi = hi.min(sweep);
        if hi > lo && best.is_none_or(|(_, len)| hi - lo > len) {
            best = Some((lo, hi - lo));
        }
    };
    consider(off, off + lb);
    consider(off - TAU, off - TAU + lb);
    best.map(|(lo, len)| (canonical_angle(start + lo), len))
}

/// `X^r` for planar `X`: for every generator circle, the angular interval of
/// its boundary inside all other disks, stitched counterclockwise.
pub fn disk_intersection(points: &PointSet, r: f64) -> Result<ArcPolygon2D> {
    check_radius(r)?;
    let pts = planar(points)?;
    let meb = circumradius(points);
    let gap = meb.radius - r;
    if gap.abs() <= POINT_TOL * r.max(1.0) {
        return Ok(ArcPolygon2D::SinglePoint {
            point: [meb.center[0], meb.center[1]],
        });
    }
    if gap > 0.0 {
        return Ok(ArcPolygon2D::Empty);
    }

    let mut centers: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if !centers.contains(&p) {
            centers.push(p);
        }
    }
    if centers.len() == 1 {
        return Ok(ArcPolygon2D::Arcs {
            arcs: vec![Arc2::full(centers[0], r)],
        });
    }

    let mut arcs = Vec::new();
    'circles: for (i, ci) in centers.iter().enumerate() {
        let mut interval: Option<(f64, f64)> = None;
        for (j, cj) in centers.iter().enumerate() {
            if i == j {
                continue;
            }
            let (dx, dy) = (cj[0] - ci[0], cj[1] - ci[1]);
            let d = dx.hypot(dy);
            // points of circle i inside disk j: cos(θ − φ) ≥ d / 2r
            let half = (((2.0 * r - d) * (2.0 * r + d)).max(0.0).sqrt()).atan2(d);
            let phi = dy.atan2(dx);
            let (b, lb) = (canonical_angle(phi - half), 2.0 * half);
            interval = match interval {
                None => Some((b, lb)),
                Some((s, len)) => intersect_intervals(s, len, b, lb),
            };
            if interval.is_none() {
                continue 'circles;
            }
        }
        if let Some((start, sweep)) = interval {
            if sweep > MIN_ARC_SWEEP {
                arcs.push(Arc2 {
                    center: *ci,
                    radius: r,
                    start,
                    sweep,
                });
            }
        }
    }
    if arcs.is_empty() {
        // every arc collapsed: the body is numerically a point
        return Ok(ArcPolygon2D::SinglePoint {
            point: [meb.center[0], meb.center[1]],
        });
    }
    // outward normals increase monotonically along a convex boundary
    arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
    Ok(ArcPolygon2D::Arcs { arcs })
}

/// `conv_r P = (P^r)^r` for planar `P`.
///
/// Built by duality from `D = P^r`: each vertex of `D` is the center of one
/// hull arc, which runs between the centers of the two `D` arcs meeting
/// there; the hull vertices are the generators that carry arcs of `D`.
pub fn spindle_hull_2d(points: &PointSet, r: f64) -> Result<ArcPolygon2D> {
    check_radius(r)?;
    let body = disk_intersection(points, r)?;
    match body {
        ArcPolygon2D::Empty => Err(Error::HullEmpty {
            circumradius: circumradius(points).radius,
            radius: r,
        }),
        ArcPolygon2D::SinglePoint { point } => Ok(ArcPolygon2D::Arcs {
            arcs: vec![Arc2::full(point, r)],
        }),
        ArcPolygon2D::Arcs { arcs } if arcs.len() == 1 => Ok(ArcPolygon2D::SinglePoint { point: arcs[0].center }),
        ArcPolygon2D::Arcs { arcs } => {
            let n = arcs.len();
            let mut hull = Vec::with_capacity(n);
            for k in 0..n {
                let before = &arcs[(k + n - 1) % n];
                let after = &arcs[k];
                let vertex = midpoint(before.end_point(), after.start_point());
                let start = angle_to(vertex, before.center);
                let end = angle_to(vertex, after.center);
                let mut sweep = canonical_angle(end - start);
                if sweep > PI + 1e-9 {
                    // rounding at a nearly flat vertex
                    sweep = 0.0;
                }
                if sweep > MIN_ARC_SWEEP {
                    hull.push(Arc2 {
                        center: vertex,
                        radius: r,
                        start,
                        sweep,
                    });
                }
            }
            if hull.is_empty() {
                return Ok(ArcPolygon2D::SinglePoint { point: arcs[0].center });
            }
            Ok(ArcPolygon2D::Arcs { arcs: hull })
        }
    }
}

fn midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn angle_to(from: [f64; 2], to: [f64; 2]) -> f64 {
    canonical_angle((to[1] - from[1]).atan2(to[0] - from[0]))
}

impl ArcPolygon2D {
    pub fn arcs(&self) -> &[Arc2] {
        match self {
            ArcPolygon2D::Arcs { arcs } => arcs,
            _ => &[],
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ArcPolygon2D::Empty)
    }

    /// Vertices in boundary order: the start point of every arc.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        match self {
            ArcPolygon2D::Empty => vec![],
            ArcPolygon2D::SinglePoint { point } => vec![*point],
            ArcPolygon2D::Arcs { arcs } if arcs.len() == 1 => vec![],
            ArcPolygon2D::Arcs { arcs } => arcs.iter().map(Arc2::start_point).collect(),
        }
    }

    /// Shoelace area of the vertex polygon plus the circular segments
    /// `(r²/2)(θ − sin θ)` cut off by each arc.
    pub fn area(&self) -> f64 {
        let arcs = self.arcs();
        let n = arcs.len();
        let mut twice = 0.0;
        if n > 1 {
            for k in 0..n {
                let a = arcs[k].start_point();
                let b = arcs[(k + 1) % n].start_point();
                twice += a[0] * b[1] - a[1] * b[0];
            }
        }
        let segments: f64 = arcs
            .iter()
            .map(|a| 0.5 * a.radius * a.radius * (a.sweep - a.sweep.sin()))
            .sum();
        0.5 * twice + segments
    }

    pub fn perimeter(&self) -> f64 {
        self.arcs().iter().map(Arc2::length).sum()
    }

    /// `V_1` of a planar convex body is half its perimeter.
    pub fn v1(&self) -> f64 {
        0.5 * self.perimeter()
    }

    /// Support function `h(u) = max ⟨u, z⟩`; `None` for the empty polygon.
    pub fn support(&self, u: [f64; 2]) -> Option<f64> {
        let dot = |p: [f64; 2]| u[0] * p[0] + u[1] * p[1];
        match self {
            ArcPolygon2D::Empty => None,
            ArcPolygon2D::SinglePoint { point } => Some(dot(*point)),
            ArcPolygon2D::Arcs { arcs } => {
                let norm = u[0].hypot(u[1]);
                let theta = canonical_angle(u[1].atan2(u[0]));
                let mut best = f64::NEG_INFINITY;
                for a in arcs {
                    if a.contains_angle(theta) {
                        best = best.max(dot(a.center) + a.radius * norm);
                    }
                    best = best.max(dot(a.start_point())).max(dot(a.end_point()));
                }
                Some(best)
            }
        }
    }

    /// Width in direction `u`: `h(u) + h(−u)`.
    pub fn width(&self, u: [f64; 2]) -> Option<f64> {
        Some(self.support(u)? + self.support([-u[0], -u[1]])?)
    }

    /// Membership with absolute slack `tol`.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        match self {
            ArcPolygon2D::Empty => false,
            ArcPolygon2D::SinglePoint { point } => (p[0] - point[0]).hypot(p[1] - point[1]) <= tol,
            ArcPolygon2D::Arcs { arcs } => arcs
                .iter()
                .all(|a| (p[0] - a.center[0]).hypot(p[1] - a.center[1]) <= a.radius + tol),
        }
    }

    /// Boundary points: every vertex plus `per_arc − 1` interior points of
    /// each arc.
    pub fn sample_boundary(&self, per_arc: usize) -> Vec<[f64; 2]> {
        match self {
            ArcPolygon2D::Empty => vec![],
            ArcPolygon2D::SinglePoint { point } => vec![*point],
            ArcPolygon2D::Arcs { arcs } => arcs
                .iter()
                .flat_map(|a| (0..per_arc.max(1)).map(move |i| a.point_at(i as f64 / per_arc.max(1) as f64)))
                .collect(),
        }
    }

    /// Hausdorff distance between two convex regions,
    /// `max_u |h_A(u) − h_B(u)|`, over `directions` equally spaced directions
    /// plus every arc-end normal of both polygons.
    pub fn hausdorff(&self, other: &ArcPolygon2D, directions: usize) -> Option<f64> {
        let mut angles: Vec<f64> = (0..directions).map(|i| TAU * i as f64 / directions as f64).collect();
        for a in self.arcs().iter().chain(other.arcs()) {
            angles.push(a.start);
            angles.push(a.start + a.sweep);
        }
        let mut worst: f64 = 0.0;
        for t in angles {
            let u = [t.cos(), t.sin()];
            worst = worst.max((self.support(u)? - other.support(u)?).abs());
        }
        Some(worst)
    }

    /// Largest gap between the end of one arc and the start of the next.
    pub fn max_vertex_gap(&self) -> f64 {
        let arcs = self.arcs();
        let n = arcs.len();
        (0..n)
            .map(|k| {
                let a = arcs[k].end_point();
                let b = arcs[(k + 1) % n].start_point();
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .fold(0.0, f64::max)
    }
}
