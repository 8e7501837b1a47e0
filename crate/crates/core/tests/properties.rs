mod common;

use proptest::prelude::*;

use ballbody::contraction::{
    is_contraction, is_uniform_contraction, sample_clustered, sample_separated, threshold_n, ThresholdMode,
};
use ballbody::estimators::EstimatorConfig;
use ballbody::exact2d::{disk_intersection, spindle_hull_2d};
use ballbody::geometry::{ball_hull_membership, circumradius, dual, HullMembership};
use ballbody::PointSet;

fn point_set(d: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 1..=max_n)
}

fn planar_set() -> impl Strategy<Value = PointSet> {
    point_set(2, 12).prop_map(|p| PointSet::new(2, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circumradius_matches_brute_force((d, pts) in (1usize..=4).prop_flat_map(|d| (Just(d), point_set(d, 7)))) {
        let ball = circumradius(&PointSet::new(d, pts.clone()).unwrap());
        let want = common::brute_force_meb(&pts);
        prop_assert!((ball.radius - want).abs() <= 1e-12 * want.max(1.0));
        for p in &pts {
            let dist = p.iter().zip(&ball.center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            prop_assert!(dist <= ball.radius * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn dual_membership_is_distance_to_every_generator(
        pts in point_set(3, 8),
        q in prop::collection::vec(-2.0f64..2.0, 3),
        r in 0.5f64..2.5,
    ) {
        let p = PointSet::new(3, pts.clone()).unwrap();
        let body = dual(&p, r).unwrap();
        let far = pts.iter().map(|x| x.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()).fold(0.0, f64::max);
        if (far - r).abs() > 1e-9 {
            prop_assert_eq!(body.contains(&q).unwrap(), far < r);
        }
    }

    #[test]
    fn planar_body_and_hull_have_complementary_perimeters(p in planar_set(), r in 1.5f64..4.0) {
        let hull = spindle_hull_2d(&p, r).unwrap();
        let body = disk_intersection(&p, r).unwrap();
        prop_assert!((hull.v1() + body.v1() - std::f64::consts::PI * r).abs() < 1e-7 * r);
        for x in p.iter() {
            prop_assert!(hull.contains([x[0], x[1]], 1e-9));
        }
    }

    #[test]
    fn generators_lie_in_their_ball_hull(pts in point_set(3, 8), r in 1.5f64..3.0) {
        let p = PointSet::new(3, pts).unwrap();
        let cfg = EstimatorConfig::default();
        for i in 0..p.len() {
            let m = ball_hull_membership(&p, r, p.point(i), &cfg).unwrap();
            prop_assert!(!matches!(m, HullMembership::Outside { .. }), "{m:?}");
        }
    }

    #[test]
    fn two_disk_lens_matches_closed_form(s in 0.0f64..1.99, r in 0.2f64..3.0) {
        let p = PointSet::new(2, vec![vec![0.0, 0.0], vec![s * r, 0.0]]).unwrap();
        let lens = disk_intersection(&p, r).unwrap();
        prop_assert!((lens.area() - common::lens_area(r, s * r)).abs() < 1e-9 * r * r);
        prop_assert!((lens.perimeter() - common::lens_perimeter(r, s * r)).abs() < 1e-9 * r);
    }

    #[test]
    fn sampled_pairs_are_uniform_contractions(d in 2usize..=5, n in 1usize..=12, lambda in 0.05f64..2.0, seed: u64) {
        let p = sample_separated(d, n, lambda, seed).unwrap();
        let q = sample_clustered(d, n, lambda, seed).unwrap();
        prop_assert!(is_uniform_contraction(&p, &q, lambda).unwrap());
        prop_assert!(is_contraction(&p, &q).unwrap());
    }

    #[test]
    fn point_sets_round_trip(pts in point_set(3, 10)) {
        let p = PointSet::new(3, pts).unwrap();
        prop_assert_eq!(PointSet::from_json(&p.to_json().unwrap()).unwrap(), p.clone());
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        prop_assert_eq!(PointSet::read_csv(buf.as_slice()).unwrap(), p);
    }
}

#[test]
fn main_threshold_grows_with_dimension() {
    let values: Vec<f64> = (2..=41)
        .map(|d| threshold_n(d, ThresholdMode::MainI).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    for d in 2..=30u32 {
        assert_eq!(
            threshold_n(d as usize, ThresholdMode::MainI).unwrap().minimal_n,
            common::pell_ceil(d) as f64
        );
    }
}
