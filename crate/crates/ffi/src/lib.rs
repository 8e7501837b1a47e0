//! C interface to `ballbody`.
//!
//! Objects are opaque handles created by `*_new` or producer functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`BbStatus`]; on failure a message is available from
//! [`bb_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ballbody::contraction::{classify_instance, threshold_n, BoundCase, ThresholdMode};
use ballbody::estimators::{EstimatorConfig, Method};
use ballbody::exact2d::{disk_intersection, spindle_hull_2d};
use ballbody::geometry::{ball_intrinsic_volume, circumradius, dual, BallBody, BodyStatus};
use ballbody::harness::body_intrinsic_volume;
use ballbody::{Error, PointSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    DimensionMismatch = 3,
    HullEmpty = 4,
    EmptyBody = 5,
    NoConvergence = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbBodyStatus {
    Empty = 0,
    Point = 1,
    FullDim = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbMethod {
    Exact = 0,
    ArcPolygon = 1,
    MonteCarloVolume = 2,
    MeanWidth = 3,
    Kubota = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbThresholdMode {
    MainI = 0,
    MainIi = 1,
    Packing = 2,
    JungB = 3,
    RefinedA = 4,
    RefinedB = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbBoundCase {
    TrivialEmpty = 0,
    PackingEmptyNaive = 1,
    PackingEmptySausage = 2,
    JungChainNaive = 3,
    JungChainRefined = 4,
    NotCovered = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbEstimatorConfig {
    pub samples: u64,
    pub seed: u64,
    pub confidence_z: f64,
    pub feasibility_tolerance: f64,
    pub max_projection_iters: u64,
    pub directions: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples_used: u64,
    pub method: BbMethod,
    pub flagged: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbThreshold {
    pub value: f64,
    pub minimal_n: f64,
    pub applicable: bool,
}

/// Opaque point set.
pub struct BbPointSet(PointSet);

/// Opaque r-ball body.
pub struct BbBallBody(BallBody);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BbStatus {
    match e {
        Error::InvalidParameter(_) => BbStatus::InvalidArgument,
        Error::DimensionMismatch { .. } => BbStatus::DimensionMismatch,
        Error::HullEmpty { .. } => BbStatus::HullEmpty,
        Error::EmptyBody => BbStatus::EmptyBody,
        Error::NoConvergence { .. } => BbStatus::NoConvergence,
        Error::Parse(_) => BbStatus::Parse,
        Error::Io(_) => BbStatus::Io,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (BbStatus, String)>) -> BbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside ballbody".into());
            BbStatus::Panic
        }
    }
}

fn lib(e: Error) -> (BbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BbStatus, String) {
    (BbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, (BbStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), (BbStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn coords<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], (BbStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a point set from `n` points of dimension `dim`, stored row-major.
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_point_set_new(
    dim: usize,
    coords_ptr: *const f64,
    n: usize,
    out: *mut *mut BbPointSet,
) -> BbStatus {
    guard(|| {
        let len = n
            .checked_mul(dim)
            .ok_or((BbStatus::InvalidArgument, "size overflow".to_string()))?;
        let data = coords(coords_ptr, len, "coords")?.to_vec();
        let ps = PointSet::from_flat(dim, data).map_err(lib)?;
        write(out, Box::into_raw(Box::new(BbPointSet(ps))), "out")
    })
}

/// # Safety
/// `ps` must be null or a handle from `bb_point_set_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bb_point_set_free(ps: *mut BbPointSet) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// # Safety
/// `ps` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bb_point_set_len(ps: *const BbPointSet) -> usize {
    ps.as_ref().map_or(0, |p| p.0.len())
}

/// # Safety
/// `ps` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bb_point_set_dim(ps: *const BbPointSet) -> usize {
    ps.as_ref().map_or(0, |p| p.0.dim())
}

/// Radius of the minimal enclosing ball; its center is written to
/// `out_center` (`dim` doubles) unless that is null.
///
/// # Safety
/// `ps` must be a live handle; `out_radius` writable; `out_center` null or
/// writable for `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn bb_circumradius(
    ps: *const BbPointSet,
    out_radius: *mut f64,
    out_center: *mut f64,
) -> BbStatus {
    guard(|| {
        let ps = read(ps, "ps")?;
        let meb = circumradius(&ps.0);
        if !out_center.is_null() {
            ptr::copy_nonoverlapping(meb.center.as_ptr(), out_center, meb.center.len());
        }
        write(out_radius, meb.radius, "out_radius")
    })
}

/// `X^r`, the intersection of the radius-`r` balls centered at the points.
///
/// # Safety
/// `ps` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_dual(ps: *const BbPointSet, radius: f64, out: *mut *mut BbBallBody) -> BbStatus {
    guard(|| {
        let ps = read(ps, "ps")?;
        let body = dual(&ps.0, radius).map_err(lib)?;
        write(out, Box::into_raw(Box::new(BbBallBody(body))), "out")
    })
}

/// # Safety
/// `body` must be null or a handle from `bb_dual`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bb_ball_body_free(body: *mut BbBallBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// # Safety
/// `body` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_ball_body_status(body: *const BbBallBody, out: *mut BbBodyStatus) -> BbStatus {
    guard(|| {
        let body = read(body, "body")?;
        let s = match body.0.status() {
            BodyStatus::Empty => BbBodyStatus::Empty,
            BodyStatus::Point { .. } => BbBodyStatus::Point,
            BodyStatus::FullDim => BbBodyStatus::FullDim,
        };
        write(out, s, "out")
    })
}

/// Exact membership of a `dim`-vector.
///
/// # Safety
/// `body` must be a live handle; `q` readable for `dim` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_ball_body_contains(
    body: *const BbBallBody,
    q: *const f64,
    dim: usize,
    out: *mut bool,
) -> BbStatus {
    guard(|| {
        let body = read(body, "body")?;
        let q = coords(q, dim, "q")?;
        let inside = body.0.contains(q).map_err(lib)?;
        write(out, inside, "out")
    })
}

#[no_mangle]
pub extern "C" fn bb_estimator_config_default() -> BbEstimatorConfig {
    let c = EstimatorConfig::default();
    BbEstimatorConfig {
        samples: c.samples as u64,
        seed: c.seed,
        confidence_z: c.confidence_z,
        feasibility_tolerance: c.feasibility_tolerance,
        max_projection_iters: c.max_projection_iters as u64,
        directions: c.directions as u64,
    }
}

fn to_config(c: &BbEstimatorConfig) -> Result<EstimatorConfig, (BbStatus, String)> {
    let size = |v: u64| usize::try_from(v).map_err(|_| (BbStatus::InvalidArgument, "count too large".to_string()));
    Ok(EstimatorConfig {
        samples: size(c.samples)?,
        seed: c.seed,
        confidence_z: c.confidence_z,
        feasibility_tolerance: c.feasibility_tolerance,
        max_projection_iters: size(c.max_projection_iters)?,
        directions: size(c.directions)?,
    })
}

/// `V_k` of the body: exact in the plane, estimated otherwise. A null
/// `cfg` uses the defaults.
///
/// # Safety
/// `body` must be a live handle; `cfg` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bb_ball_body_intrinsic_volume(
    body: *const BbBallBody,
    k: usize,
    cfg: *const BbEstimatorConfig,
    out: *mut BbEstimate,
) -> BbStatus {
    guard(|| {
        let body = read(body, "body")?;
        let cfg = match cfg.as_ref() {
            Some(c) => to_config(c)?,
            None => EstimatorConfig::default(),
        };
        let e = body_intrinsic_volume(&body.0, k, &cfg).map_err(lib)?;
        let method = match e.method {
            Method::Exact => BbMethod::Exact,
            Method::ArcPolygon => BbMethod::ArcPolygon,
            Method::MonteCarloVolume => BbMethod::MonteCarloVolume,
            Method::MeanWidth => BbMethod::MeanWidth,
            Method::Kubota => BbMethod::Kubota,
        };
        write(
            out,
            BbEstimate {
                value: e.value,
                std_error: e.std_error,
                samples_used: e.samples_used as u64,
                method,
                flagged: e.flagged as u64,
            },
            "out",
        )
    })
}

/// `V_k` of a `d`-ball of the given radius.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_ball_intrinsic_volume(d: usize, k: usize, radius: f64, out: *mut f64) -> BbStatus {
    guard(|| write(out, ball_intrinsic_volume(d, k, radius).map_err(lib)?, "out"))
}

/// Area and `V_1` (half the perimeter) of a planar `X^r`.
///
/// # Safety
/// `ps` must be a live planar handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn bb_disk_intersection_metrics(
    ps: *const BbPointSet,
    radius: f64,
    out_area: *mut f64,
    out_v1: *mut f64,
) -> BbStatus {
    guard(|| {
        let poly = disk_intersection(&read(ps, "ps")?.0, radius).map_err(lib)?;
        write(out_area, poly.area(), "out_area")?;
        write(out_v1, poly.v1(), "out_v1")
    })
}

/// Area and `V_1` of the planar ball hull of the points.
///
/// # Safety
/// `ps` must be a live planar handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn bb_spindle_hull_metrics(
    ps: *const BbPointSet,
    radius: f64,
    out_area: *mut f64,
    out_v1: *mut f64,
) -> BbStatus {
    guard(|| {
        let poly = spindle_hull_2d(&read(ps, "ps")?.0, radius).map_err(lib)?;
        write(out_area, poly.area(), "out_area")?;
        write(out_v1, poly.v1(), "out_v1")
    })
}

/// Threshold on `N`. `r` and `lambda` are read only by the packing modes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_threshold_n(
    d: usize,
    mode: BbThresholdMode,
    r: f64,
    lambda: f64,
    out: *mut BbThreshold,
) -> BbStatus {
    guard(|| {
        let mode = match mode {
            BbThresholdMode::MainI => ThresholdMode::MainI,
            BbThresholdMode::MainIi => ThresholdMode::MainIi,
            BbThresholdMode::Packing => ThresholdMode::Packing { r, lambda },
            BbThresholdMode::JungB => ThresholdMode::JungB,
            BbThresholdMode::RefinedA => ThresholdMode::RefinedA { r, lambda },
            BbThresholdMode::RefinedB => ThresholdMode::RefinedB,
        };
        let t = threshold_n(d, mode).map_err(lib)?;
        write(
            out,
            BbThreshold {
                value: t.value,
                minimal_n: t.minimal_n,
                applicable: t.applicable,
            },
            "out",
        )
    })
}

/// Which argument settles the comparison for `(d, N, λ, r)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_classify_instance(
    d: usize,
    n: u64,
    lambda: f64,
    r: f64,
    out: *mut BbBoundCase,
) -> BbStatus {
    guard(|| {
        let case = match classify_instance(d, n, lambda, r).map_err(lib)? {
            BoundCase::TrivialEmpty => BbBoundCase::TrivialEmpty,
            BoundCase::PackingEmptyNaive => BbBoundCase::PackingEmptyNaive,
            BoundCase::PackingEmptySausage => BbBoundCase::PackingEmptySausage,
            BoundCase::JungChainNaive => BbBoundCase::JungChainNaive,
            BoundCase::JungChainRefined => BbBoundCase::JungChainRefined,
            BoundCase::NotCovered => BbBoundCase::NotCovered,
        };
        write(out, case, "out")
    })
}
