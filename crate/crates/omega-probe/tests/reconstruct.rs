use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use omega_probe::geometry::regular_polygon;
use omega_probe::harness::hausdorff_aligned;
use omega_probe::reconstruct::general_bound;
use omega_probe::{
    count_narrow, new_session, reconstruct_general, reconstruct_greedy, reconstruct_no_narrow,
    reconstruct_right_angle, ArmPolicy, ConvexPolygon, Point, Reconstruction,
};

fn exact(r: &Reconstruction, poly: &ConvexPolygon) -> bool {
    r.is_exact() && hausdorff_aligned(&r.vertices, poly.vertices()) <= 1e-7 * poly.diameter()
}

#[test]
fn regular_polygons_within_two_n_minus_two() {
    for n in 5..=16 {
        let poly = regular_polygon(n, 1.0, 0.3);
        for omega in [FRAC_PI_4, FRAC_PI_3, 1.3] {
            let mut s = new_session(poly.clone(), omega, ArmPolicy::default(), 0).unwrap();
            let r = reconstruct_no_narrow(&mut s).unwrap();
            assert!(exact(&r, &poly), "n = {n}, ω = {omega}");
            assert!(
                r.probes_used <= 2 * n - 2,
                "n = {n}: {} probes",
                r.probes_used
            );
            let mut s = new_session(poly.clone(), omega, ArmPolicy::default(), 0).unwrap();
            let g = reconstruct_greedy(&mut s).unwrap();
            assert!(exact(&g, &poly) && g.probes_used <= 2 * n - 2);
        }
    }
}

#[test]
fn right_angle_saves_a_probe_with_its_hit() {
    for n in 5..=16 {
        let poly = regular_polygon(n, 2.0, 0.1);
        let mut s = new_session(poly.clone(), FRAC_PI_2, ArmPolicy::default(), 0).unwrap();
        let r = reconstruct_right_angle(&mut s).unwrap();
        assert!(exact(&r, &poly));
        assert!(r.probes_used <= 2 * n - 3);
        assert_eq!(r.hit_gain, Some(2));
    }
}

#[test]
fn one_narrow_vertex_costs_one_extra_probe() {
    // a kite whose tip at (3, 0) has angle 2·atan(1/3) ≈ 0.64 < π/3
    let kite = ConvexPolygon::new(vec![
        Point::new(-1.0, 0.0),
        Point::new(0.0, -1.0),
        Point::new(3.0, 0.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap();
    assert_eq!(count_narrow(&kite, FRAC_PI_3), 1);
    let mut s = new_session(kite.clone(), FRAC_PI_3, ArmPolicy::default(), 0).unwrap();
    let r = reconstruct_general(&mut s, None).unwrap();
    assert!(exact(&r, &kite));
    assert_eq!(general_bound(4, 1), 7);
    assert!(r.probes_used <= general_bound(4, 1));
}

#[test]
fn results_are_reproducible() {
    let poly = regular_polygon(9, 1.0, 0.7);
    let run = || {
        let mut s = new_session(poly.clone(), FRAC_PI_3, ArmPolicy::SeededRandom, 4).unwrap();
        reconstruct_no_narrow(&mut s).unwrap()
    };
    assert_eq!(run(), run());
}
