use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ball_intrinsic_volume, omega};

/// Smallest dimension in which the sausage bound on the volume of the
/// convex hull of a packing of congruent balls is available.
pub const SAUSAGE_MIN_DIM: usize = 42;

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} = {v} must be positive and finite"
        )));
    }
    Ok(())
}

/// `√(2d/(d+1)) · λ/2`: radius of a ball containing any set of diameter `λ`.
pub fn jung_radius(d: usize, lambda: f64) -> f64 {
    jung_factor(d) * lambda / 2.0
}

fn jung_factor(d: usize) -> f64 {
    (2.0 * d as f64 / (d as f64 + 1.0)).sqrt()
}

/// `μ = N^{1/d} · λ/2`: radius of the ball whose volume equals that of `N`
/// disjoint balls of radius `λ/2`.
pub fn equivalent_radius_mu(d: usize, n: u64, lambda: f64) -> f64 {
    0.5 * (n as f64).powf(1.0 / d as f64) * lambda
}

/// `r − (N^{1/d} − 1)·λ/2`.
pub fn naive_outer_radius(d: usize, n: u64, lambda: f64, r: f64) -> f64 {
    r - ((n as f64).powf(1.0 / d as f64) - 1.0) * lambda / 2.0
}

fn sausage_factor(d: usize, n: u64) -> f64 {
    (n as f64 - 1.0) * (2.0 * d as f64 / PI).sqrt() + 1.0
}

/// `r − ((((N−1)√(2d/π)) + 1)^{1/d} − 1)·λ/2`.
pub fn refined_outer_radius(d: usize, n: u64, lambda: f64, r: f64) -> f64 {
    r - (sausage_factor(d, n).powf(1.0 / d as f64) - 1.0) * lambda / 2.0
}

/// Lower bound on the volume of the convex hull of `N` disjoint balls of
/// radius `λ/2`: `(N−1)·λ·(λ/2)^{d−1}·ω_{d−1} + (λ/2)^d·ω_d`. Valid for
/// `d ≥ 42`; evaluated for any `d`.
pub fn sausage_volume_lower_bound(d: usize, n: u64, lambda: f64) -> f64 {
    let h = lambda / 2.0;
    (n as f64 - 1.0) * lambda * h.powi(d as i32 - 1) * omega(d - 1) + h.powi(d as i32) * omega(d)
}

/// The weakened sausage bound `((N−1)√(2d/π) + 1)·(λ/2)^d·ω_d`.
pub fn modified_sausage_bound(d: usize, n: u64, lambda: f64) -> f64 {
    sausage_factor(d, n) * (lambda / 2.0).powi(d as i32) * omega(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaRatio {
    pub ratio: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `ω_{d−1}/ω_d` against `√(d/(2π))`.
pub fn kappa_ratio_check(d: usize) -> Result<KappaRatio> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let ratio = omega(d - 1) / omega(d);
    let bound = (d as f64 / (2.0 * PI)).sqrt();
    Ok(KappaRatio {
        ratio,
        bound,
        ok: ratio > bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ThresholdMode {
    /// `(1+√2)^d`, for `1 < d < 42`.
    MainI,
    /// `√(π/(2d))·(1+√2)^d + 1`, for `d ≥ 42`.
    MainIi,
    /// `(1 + 2r/λ)^d`.
    Packing { r: f64, lambda: f64 },
    /// `(1 + √(2d/(d+1)))^d`, with `λ ≤ √2·r`.
    JungB,
    /// `√(π/(2d))·(1 + 2r/λ)^d + 1`, for `d ≥ 42`.
    RefinedA { r: f64, lambda: f64 },
    /// `√(π/(2d))·(1 + √(2d/(d+1)))^d + 1`, for `d ≥ 42` and `λ ≤ √2·r`.
    RefinedB,
}

impl ThresholdMode {
    pub fn name(&self) -> &'static str {
        match self {
            ThresholdMode::MainI => "main_i",
            ThresholdMode::MainIi => "main_ii",
            ThresholdMode::Packing { .. } => "packing",
            ThresholdMode::JungB => "jung_b",
            ThresholdMode::RefinedA { .. } => "refined_a",
            ThresholdMode::RefinedB => "refined_b",
        }
    }

    /// Whether the theorem behind this threshold covers dimension `d`.
    pub fn applies_to(&self, d: usize) -> bool {
        match self {
            ThresholdMode::MainIi | ThresholdMode::RefinedA { .. } | ThresholdMode::RefinedB => d >= SAUSAGE_MIN_DIM,
            ThresholdMode::MainI | ThresholdMode::Packing { .. } | ThresholdMode::JungB => d > 1,
        }
    }

    pub fn parse(name: &str, r: f64, lambda: f64) -> Result<Self> {
        Ok(match name {
            "main_i" => ThresholdMode::MainI,
            "main_ii" => ThresholdMode::MainIi,
            "packing" => ThresholdMode::Packing { r, lambda },
            "jung_b" => ThresholdMode::JungB,
            "refined_a" => ThresholdMode::RefinedA { r, lambda },
            "refined_b" => ThresholdMode::RefinedB,
            other => return Err(Error::InvalidParameter(format!("unknown threshold mode {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub value: f64,
    /// Smallest integer `N` with `N ≥ value`.
    pub minimal_n: f64,
    pub applicable: bool,
}

/// Real threshold on `N` and the smallest admissible integer.
pub fn threshold_n(d: usize, mode: ThresholdMode) -> Result<Threshold> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let di = d as i32;
    let shrink = (PI / (2.0 * d as f64)).sqrt();
    let value = match mode {
        ThresholdMode::MainI => (1.0 + SQRT_2).powi(di),
        ThresholdMode::MainIi => shrink * (1.0 + SQRT_2).powi(di) + 1.0,
        ThresholdMode::Packing { r, lambda } => {
            positive("r", r)?;
            positive("λ", lambda)?;
            (1.0 + 2.0 * r / lambda).powi(di)
        }
        ThresholdMode::JungB => (1.0 + jung_factor(d)).powi(di),
        ThresholdMode::RefinedA { r, lambda } => {
            positive("r", r)?;
            positive("λ", lambda)?;
            shrink * (1.0 + 2.0 * r / lambda).powi(di) + 1.0
        }
        ThresholdMode::RefinedB => shrink * (1.0 + jung_factor(d)).powi(di) + 1.0,
    };
    let minimal_n = match mode {
        ThresholdMode::MainI => pell_ceil(d).unwrap_or(value.ceil()),
        _ => value.ceil(),
    };
    Ok(Threshold {
        value,
        minimal_n,
        applicable: mode.applies_to(d),
    })
}

/// `ceil((1 + √2)^d)` in integer arithmetic: with `(1 + √2)^d = a + b√2`
/// the ceiling is `a + ⌊√(2b²)⌋ + 1`. Rounding `powi` gets odd `d` wrong,
/// where the value sits just above an integer. `None` once the result is no
/// longer exact in an `f64`.
fn pell_ceil(d: usize) -> Option<f64> {
    let (mut a, mut b) = (1u128, 0u128);
    for _ in 0..d {
        (a, b) = (a + 2 * b, a + b);
        if a > 1 << 50 {
            return None;
        }
    }
    let t = 2 * b * b;
    let mut s = (t as f64).sqrt() as u128;
    while s * s > t {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= t {
        s += 1;
    }
    Some((a + s + 1) as f64)
}

/// Which argument settles `V_k(P^r) ≤ V_k(Q^r)` for an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    /// `λ > 2r`: `P^r` is empty.
    TrivialEmpty,
    /// `N ≥ (1 + 2r/λ)^d`: the packing forces `cr P > r`.
    PackingEmptyNaive,
    /// Same conclusion from the sausage bound (`d ≥ 42`).
    PackingEmptySausage,
    /// `λ ≤ √2·r` and `N` above the Jung threshold.
    JungChainNaive,
    /// Jung threshold refined by the sausage bound (`d ≥ 42`).
    JungChainRefined,
    NotCovered,
}

impl BoundCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundCase::TrivialEmpty => "trivial_empty",
            BoundCase::PackingEmptyNaive => "packing_empty_naive",
            BoundCase::PackingEmptySausage => "packing_empty_sausage",
            BoundCase::JungChainNaive => "jung_chain_naive",
            BoundCase::JungChainRefined => "jung_chain_refined",
            BoundCase::NotCovered => "not_covered",
        }
    }

    pub fn is_packing(&self) -> bool {
        matches!(self, BoundCase::PackingEmptyNaive | BoundCase::PackingEmptySausage)
    }

    pub fn is_jung(&self) -> bool {
        matches!(self, BoundCase::JungChainNaive | BoundCase::JungChainRefined)
    }
}

/// Case dispatch. For `d ≥ 42` the sausage-based tests are tried first
/// because they fire at smaller `N`.
pub fn classify_instance(d: usize, n: u64, lambda: f64, r: f64) -> Result<BoundCase> {
    positive("λ", lambda)?;
    positive("r", r)?;
    if d < 2 || n == 0 {
        return Err(Error::InvalidParameter("need d ≥ 2 and N ≥ 1".into()));
    }
    if lambda > 2.0 * r {
        return Ok(BoundCase::TrivialEmpty);
    }
    let nf = n as f64;
    let big = d >= SAUSAGE_MIN_DIM;
    if big && nf >= threshold_n(d, ThresholdMode::RefinedA { r, lambda })?.value {
        return Ok(BoundCase::PackingEmptySausage);
    }
    if nf >= threshold_n(d, ThresholdMode::Packing { r, lambda })?.value {
        return Ok(BoundCase::PackingEmptyNaive);
    }
    if lambda <= SQRT_2 * r {
        if big && nf >= threshold_n(d, ThresholdMode::RefinedB)?.value {
            return Ok(BoundCase::JungChainRefined);
        }
        if nf >= threshold_n(d, ThresholdMode::JungB)?.value {
            return Ok(BoundCase::JungChainNaive);
        }
    }
    Ok(BoundCase::NotCovered)
}

/// The evaluated bound chain for one parameter tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub d: usize,
    pub n: u64,
    pub lambda: f64,
    pub r: f64,
    pub k: usize,
    pub jung_radius: f64,
    pub inner_radius: f64,
    pub equiv_radius_mu: f64,
    pub naive_outer_radius: f64,
    pub refined_outer_radius: f64,
    /// Strict lower bound on `min V_k(Q^r)` over `λ`-clusters `Q`.
    pub f_lower: f64,
    /// Upper bound on `max V_k(P^r)` over `λ`-separated `P`.
    pub g_upper: f64,
    pub case: BoundCase,
    pub sausage_valid: bool,
}

/// `V_k` of a ball, with radius `≤ 0` meaning the empty set.
fn ball_vk_or_zero(d: usize, k: usize, radius: f64) -> Result<f64> {
    if radius <= 0.0 {
        Ok(0.0)
    } else {
        ball_intrinsic_volume(d, k, radius)
    }
}

pub fn bound_chain(d: usize, n: u64, lambda: f64, r: f64, k: usize) -> Result<BoundReport> {
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={d}")));
    }
    let case = classify_instance(d, n, lambda, r)?;
    let sausage_valid = d >= SAUSAGE_MIN_DIM;
    let jung = jung_radius(d, lambda);
    let inner = r - jung;
    let naive = naive_outer_radius(d, n, lambda, r);
    let refined = refined_outer_radius(d, n, lambda, r);
    let f_lower = ball_vk_or_zero(d, k, inner)?;
    let g_upper = match case {
        BoundCase::TrivialEmpty | BoundCase::PackingEmptyNaive | BoundCase::PackingEmptySausage => 0.0,
        _ => ball_vk_or_zero(d, k, if sausage_valid { refined } else { naive })?,
    };
    Ok(BoundReport {
        d,
        n,
        lambda,
        r,
        k,
        jung_radius: jung,
        inner_radius: inner,
        equiv_radius_mu: equivalent_radius_mu(d, n, lambda),
        naive_outer_radius: naive,
        refined_outer_radius: refined,
        f_lower,
        g_upper,
        case,
        sausage_valid,
    })
}

impl BoundReport {
    /// Whether the report's own conclusion holds: `g < f` on the Jung
    /// chain, `g = 0` whenever `P^r` is forced empty.
    pub fn certified(&self) -> bool {
        match self.case {
            BoundCase::TrivialEmpty | BoundCase::PackingEmptyNaive | BoundCase::PackingEmptySausage => {
                self.g_upper == 0.0 && self.f_lower >= 0.0
            }
            BoundCase::JungChainNaive | BoundCase::JungChainRefined => self.g_upper < self.f_lower,
            BoundCase::NotCovered => false,
        }
    }

    pub fn csv_header() -> &'static [&'static str] {
        &[
            "d",
            "N",
            "lambda_over_r",
            "k",
            "case",
            "jung_radius",
            "inner_radius",
            "equiv_radius_mu",
            "naive_outer_radius",
            "refined_outer_radius",
            "f_lower",
            "g_upper",
            "certified",
        ]
    }

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.n.to_string(),
            format!("{}", self.lambda / self.r),
            self.k.to_string(),
            self.case.as_str().to_string(),
            format!("{:e}", self.jung_radius),
            format!("{:e}", self.inner_radius),
            format!("{:e}", self.equiv_radius_mu),
            format!("{:e}", self.naive_outer_radius),
            format!("{:e}", self.refined_outer_radius),
            format!("{:e}", self.f_lower),
            format!("{:e}", self.g_upper),
            self.certified().to_string(),
        ]
    }
}
