use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use ballbody_ffi::*;

fn lens() -> *mut BbPointSet {
    let coords = [-0.5, 0.0, 0.5, 0.0];
    let mut ps = ptr::null_mut();
    assert_eq!(
        unsafe { bb_point_set_new(2, coords.as_ptr(), 2, &mut ps) },
        BbStatus::Ok
    );
    ps
}

fn last_error() -> String {
    let p = bb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn point_set_round_trip() {
    let ps = lens();
    unsafe {
        assert_eq!(bb_point_set_len(ps), 2);
        assert_eq!(bb_point_set_dim(ps), 2);
        let mut r = 0.0;
        let mut c = [9.0; 2];
        assert_eq!(bb_circumradius(ps, &mut r, c.as_mut_ptr()), BbStatus::Ok);
        assert_eq!(r, 0.5);
        assert_eq!(c, [0.0, 0.0]);
        bb_point_set_free(ps);
    }
}

#[test]
fn dual_status_membership_and_volume() {
    let ps = lens();
    unsafe {
        let mut body = ptr::null_mut();
        assert_eq!(bb_dual(ps, 1.0, &mut body), BbStatus::Ok);
        let mut status = BbBodyStatus::Empty;
        assert_eq!(bb_ball_body_status(body, &mut status), BbStatus::Ok);
        assert_eq!(status, BbBodyStatus::FullDim);

        let mut inside = false;
        let top = [0.0, 3f64.sqrt() / 2.0 - 1e-9];
        assert_eq!(bb_ball_body_contains(body, top.as_ptr(), 2, &mut inside), BbStatus::Ok);
        assert!(inside);
        let outside = [0.0, 0.9];
        assert_eq!(
            bb_ball_body_contains(body, outside.as_ptr(), 2, &mut inside),
            BbStatus::Ok
        );
        assert!(!inside);
        assert_eq!(
            bb_ball_body_contains(body, outside.as_ptr(), 3, &mut inside),
            BbStatus::DimensionMismatch
        );
        assert!(last_error().contains("dimension"));

        let mut est = BbEstimate {
            value: 0.0,
            std_error: 1.0,
            samples_used: 0,
            method: BbMethod::Kubota,
            flagged: 0,
        };
        assert_eq!(
            bb_ball_body_intrinsic_volume(body, 2, ptr::null(), &mut est),
            BbStatus::Ok
        );
        let area = 2.0 * std::f64::consts::PI / 3.0 - 3f64.sqrt() / 2.0;
        assert!((est.value - area).abs() < 1e-12);
        assert_eq!(est.method, BbMethod::ArcPolygon);
        assert_eq!(est.std_error, 0.0);

        let (mut a, mut v1) = (0.0, 0.0);
        assert_eq!(bb_disk_intersection_metrics(ps, 1.0, &mut a, &mut v1), BbStatus::Ok);
        assert!((a - area).abs() < 1e-12);
        let (mut ha, mut hv1) = (0.0, 0.0);
        assert_eq!(bb_spindle_hull_metrics(ps, 1.0, &mut ha, &mut hv1), BbStatus::Ok);
        assert!((v1 + hv1 - std::f64::consts::PI).abs() < 1e-12);

        bb_ball_body_free(body);
        bb_point_set_free(ps);
    }
}

#[test]
fn estimator_config_in_three_dimensions() {
    let coords = [0.0, 0.0, 0.0];
    unsafe {
        let mut ps = ptr::null_mut();
        assert_eq!(bb_point_set_new(3, coords.as_ptr(), 1, &mut ps), BbStatus::Ok);
        let mut body = ptr::null_mut();
        assert_eq!(bb_dual(ps, 2.0, &mut body), BbStatus::Ok);
        let mut cfg = bb_estimator_config_default();
        cfg.samples = 10_000;
        cfg.seed = 4;
        let mut est = std::mem::zeroed::<BbEstimate>();
        assert_eq!(bb_ball_body_intrinsic_volume(body, 1, &cfg, &mut est), BbStatus::Ok);
        let mut exact = 0.0;
        assert_eq!(bb_ball_intrinsic_volume(3, 1, 2.0, &mut exact), BbStatus::Ok);
        assert!((est.value - exact).abs() < 1e-9);
        assert_eq!(
            bb_ball_body_intrinsic_volume(body, 4, &cfg, &mut est),
            BbStatus::InvalidArgument
        );
        bb_ball_body_free(body);
        bb_point_set_free(ps);
    }
}

#[test]
fn thresholds_and_cases() {
    unsafe {
        let mut t = BbThreshold {
            value: 0.0,
            minimal_n: 0.0,
            applicable: false,
        };
        assert_eq!(
            bb_threshold_n(3, BbThresholdMode::MainI, 0.0, 0.0, &mut t),
            BbStatus::Ok
        );
        assert_eq!(t.minimal_n, 15.0);
        assert!(t.applicable);
        assert_eq!(
            bb_threshold_n(3, BbThresholdMode::Packing, 1.0, 0.0, &mut t),
            BbStatus::InvalidArgument
        );
        let mut case = BbBoundCase::NotCovered;
        assert_eq!(bb_classify_instance(3, 15, 1.0, 1.0, &mut case), BbStatus::Ok);
        assert_eq!(case, BbBoundCase::JungChainNaive);
        assert_eq!(bb_classify_instance(3, 15, 3.0, 1.0, &mut case), BbStatus::Ok);
        assert_eq!(case, BbBoundCase::TrivialEmpty);
    }
}

#[test]
fn invalid_arguments_are_reported() {
    unsafe {
        let mut ps = ptr::null_mut();
        assert_eq!(bb_point_set_new(2, ptr::null(), 3, &mut ps), BbStatus::NullPointer);
        assert!(ps.is_null());
        let bad = [f64::NAN, 0.0];
        assert_eq!(bb_point_set_new(2, bad.as_ptr(), 1, &mut ps), BbStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        let good = lens();
        let mut body = ptr::null_mut();
        assert_eq!(bb_dual(good, -1.0, &mut body), BbStatus::InvalidArgument);
        assert_eq!(bb_dual(ptr::null(), 1.0, &mut body), BbStatus::NullPointer);
        bb_point_set_free(good);
        bb_point_set_free(ptr::null_mut());
        bb_ball_body_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(bb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/ballbody.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "bb_point_set_new",
        "bb_dual",
        "bb_ball_body_free",
        "bb_last_error_message",
        "BB_STATUS_NO_CONVERGENCE",
    ] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let src = std::env::temp_dir().join(format!("ballbody_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        r#"#include "ballbody.h"
int main(void) {
    double xy[4] = {-0.5, 0.0, 0.5, 0.0};
    BbPointSet *ps = NULL;
    BbBallBody *body = NULL;
    BbBodyStatus st;
    if (bb_point_set_new(2, xy, 2, &ps) != BB_STATUS_OK) return 1;
    if (bb_dual(ps, 1.0, &body) != BB_STATUS_OK) return 2;
    bb_ball_body_status(body, &st);
    bb_ball_body_free(body);
    bb_point_set_free(ps);
    return st == BB_BODY_STATUS_FULL_DIM ? 0 : 3;
}
"#,
    )
    .unwrap();
    let out = match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .output()
    {
        Ok(out) => out,
        Err(e) => {
            eprintln!("skipping C compile: {e}");
            return;
        }
    };
    let _ = std::fs::remove_file(&src);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
