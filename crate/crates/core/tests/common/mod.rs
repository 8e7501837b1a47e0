//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's geometry code.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

/// Solves `a·x = b` by Gaussian elimination with partial pivoting. `None`
/// when a pivot falls below `1e-12` relative to the largest entry.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Center of the smallest sphere through `pts` lying in their affine hull.
pub fn affine_circumcenter(pts: &[&[f64]]) -> Option<Vec<f64>> {
    let p0 = pts[0];
    let m = pts.len() - 1;
    let rows: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let a: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| 2.0 * dot(&rows[i], &rows[j])).collect())
        .collect();
    let b: Vec<f64> = rows.iter().map(|r| dot(r, r)).collect();
    let t = if m == 0 { Vec::new() } else { solve(a, b)? };
    let mut c = p0.to_vec();
    for (ti, row) in t.iter().zip(&rows) {
        for (ck, rk) in c.iter_mut().zip(row) {
            *ck += ti * rk;
        }
    }
    Some(c)
}

/// Minimal enclosing ball radius by enumerating every subset of at most
/// `d + 1` points, taking its circumball and keeping the smallest one that
/// covers the whole set.
pub fn brute_force_meb(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let d = points[0].len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if idx.len() > d + 1 {
            continue;
        }
        let pts: Vec<&[f64]> = idx.iter().map(|&i| points[i].as_slice()).collect();
        let Some(c) = affine_circumcenter(&pts) else { continue };
        let r2 = pts.iter().map(|p| sq(p, &c)).fold(0.0, f64::max);
        let covers = points.iter().all(|p| sq(p, &c) <= r2 * (1.0 + 1e-12) + 1e-24);
        if covers {
            best = best.min(r2.sqrt());
        }
    }
    best
}

/// `ceil((1 + √2)^d)` in exact integer arithmetic. With
/// `(1 + √2)^d = a + b√2`, the value is irrational for `d ≥ 1`, so the
/// ceiling is `a + ⌊b√2⌋ + 1`.
pub fn pell_ceil(d: u32) -> u128 {
    let (mut a, mut b) = (1u128, 0u128);
    for _ in 0..d {
        (a, b) = (a + 2 * b, a + b);
    }
    a + isqrt(2 * b * b) + 1
}

pub fn isqrt(n: u128) -> u128 {
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Unit ball volume from `ω_0 = 1`, `ω_1 = 2`, `ω_d = 2π/d · ω_{d−2}`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// `V_k` of a radius-`r` ball in `R^d` from the Steiner formula:
/// `C(d, k) · ω_d / ω_{d−k} · r^k`.
pub fn ball_vk(d: usize, k: usize, r: f64) -> f64 {
    let binom = (0..k).fold(1.0, |acc, i| acc * (d - i) as f64 / (i + 1) as f64);
    binom * unit_ball_volume(d) / unit_ball_volume(d - k) * r.powi(k as i32)
}

/// Area of the intersection of two radius-`r` disks whose centers are `s` apart.
pub fn lens_area(r: f64, s: f64) -> f64 {
    if s >= 2.0 * r {
        return 0.0;
    }
    2.0 * r * r * (s / (2.0 * r)).acos() - 0.5 * s * (4.0 * r * r - s * s).sqrt()
}

/// Perimeter of that lens.
pub fn lens_perimeter(r: f64, s: f64) -> f64 {
    if s >= 2.0 * r {
        return 0.0;
    }
    4.0 * r * (s / (2.0 * r)).acos()
}
