use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use sphdesign::cycles::{euler_cycle, GeodesicArc};
use sphdesign::linalg::{random_orthogonal, random_unit_points, UnitPoint};
use sphdesign::poly::{FnFunction, MultiPoly};
use sphdesign::quad::{
    arc_average, arc_integral, certify_design, cycle_average, gauss_legendre, monomials_of_degree,
    sphere_moment, weighted_point_cubature, Monomial,
};
use sphdesign::{build_polytope, lookup, Error, Polytope};

fn built(name: &str) -> Polytope {
    build_polytope(&lookup(name, None).unwrap()).unwrap()
}

/// Monte Carlo–free oracle: ∫ x^2 y^2 over S² is 1/15, ∫ x^4 is 1/5.
#[test]
fn moments_against_known_values() {
    assert_abs_diff_eq!(sphere_moment(&Monomial::new(vec![2, 2, 0])), 1.0 / 15.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sphere_moment(&Monomial::new(vec![4, 0, 0])), 1.0 / 5.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sphere_moment(&Monomial::new(vec![0, 0, 0, 4])), 1.0 / 8.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sphere_moment(&Monomial::new(vec![2, 2, 2, 2])), 1.0 / 1920.0, epsilon = 1e-17);
}

#[test]
fn monomial_counts_are_binomial() {
    assert_eq!(monomials_of_degree(4, 19).len(), 1540);
    assert_eq!(monomials_of_degree(3, 9).len(), 55);
}

#[test]
fn gauss_legendre_weights_sum_to_two() {
    for n in [1, 5, 30, 120] {
        let (x, w) = gauss_legendre(n);
        assert_eq!(x.len(), n);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
    }
}

#[test]
fn polyhedral_cycles_certify() {
    for (name, t) in [
        ("tetrahedron", 2),
        ("octahedron", 3),
        ("cube", 3),
        ("cuboctahedron", 3),
        ("rhombic-dodecahedron", 3),
        ("icosahedron", 5),
        ("dodecahedron", 5),
        ("icosidodecahedron", 5),
        ("rhombic-triacontahedron", 5),
    ] {
        let cycle = euler_cycle(&built(name), true).unwrap();
        let r = certify_design(Some(&cycle), None, 0.0, t, 1e-10).unwrap();
        assert!(r.certified, "{name}: {:?}", r.residuals_by_degree);
    }
}

#[test]
fn tetrahedron_cycle_is_not_a_three_design() {
    let cycle = euler_cycle(&built("tetrahedron"), true).unwrap();
    let r = certify_design(Some(&cycle), None, 0.0, 3, 1e-10).unwrap();
    assert!(!r.certified);
    assert_eq!(r.first_failing_degree, Some(3));
}

#[test]
fn edge_transitive_cycle_average_equals_single_arc() {
    let f = MultiPoly::monomial(vec![4, 2, 0], 1.0);
    for name in ["octahedron", "cube", "icosahedron", "rhombic-triacontahedron"] {
        let p = built(name);
        let cycle = euler_cycle(&p, true).unwrap();
        let (i, j) = p.edges[0];
        let arc = GeodesicArc::new(p.vertices[i].clone(), p.vertices[j].clone()).unwrap();
        let group = sphdesign::named_group(p.spec.group_name().unwrap()).unwrap();
        let reynolds = FnFunction {
            f: |x: &[f64]| group.reynolds_eval(&f, x),
            degree: 6,
        };
        assert_abs_diff_eq!(
            cycle_average(&cycle, &reynolds).unwrap(),
            arc_average(&arc, &reynolds).unwrap(),
            epsilon = 1e-12
        );
    }
}

#[test]
fn point_cubatures() {
    let ico = built("icosahedron").vertices;
    assert!(weighted_point_cubature(&[(&ico, 1.0)], 5, 1e-10).unwrap().certified);
    let e1 = [UnitPoint::new(vec![1.0, 0.0, 0.0]).unwrap()];
    let r = weighted_point_cubature(&[(&e1, 1.0)], 1, 1e-10).unwrap();
    assert!(!r.certified);
    assert_eq!(r.first_failing_degree, Some(1));
    assert!(matches!(
        weighted_point_cubature(&[(&ico, 0.7)], 5, 1e-10),
        Err(Error::WeightsNotNormalized(_))
    ));
}

#[test]
fn two_orbit_h4_cubature() {
    let x120 = built("120-cell").vertices;
    let x600 = built("600-cell").vertices;
    let r = weighted_point_cubature(&[(&x120, 16.0 / 21.0), (&x600, 5.0 / 21.0)], 19, 1e-9).unwrap();
    assert!(r.certified, "{:?}", r.residuals_by_degree);
    let plain = weighted_point_cubature(&[(&x120, 1.0)], 19, 1e-9).unwrap();
    assert!(!plain.certified);
    assert_eq!(plain.first_failing_degree, Some(12));
}

#[test]
fn cert_report_json_shape() {
    let cycle = euler_cycle(&built("octahedron"), true).unwrap();
    let r = certify_design(Some(&cycle), None, 0.0, 3, 1e-10).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["claimed_t", "tol", "residuals_by_degree", "certified", "first_failing_degree"] {
        assert!(keys.contains(&k));
    }
}

fn monomial_strategy() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..6, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arc_integral_ignores_direction(seed in 0u64..10_000, exps in monomial_strategy()) {
        let pts = random_unit_points(3, 2, seed);
        let arc = GeodesicArc::new(pts[0].clone(), pts[1].clone()).unwrap();
        let f = MultiPoly::monomial(exps, 1.0);
        let a = arc_integral(&arc, &f).unwrap();
        let b = arc_integral(&arc.reversed(), &f).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn odd_moments_vanish(exps in proptest::collection::vec(0u32..8, 2..6)) {
        let m = Monomial::new(exps.clone());
        if exps.iter().any(|e| e % 2 == 1) {
            prop_assert_eq!(sphere_moment(&m), 0.0);
        } else {
            prop_assert!(sphere_moment(&m) > 0.0);
        }
    }

    #[test]
    fn pure_squares_sum_to_one(dim in 2usize..9) {
        let total: f64 = (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 2;
                sphere_moment(&Monomial::new(e))
            })
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn certificates_are_rotation_invariant(seed in 0u64..10_000) {
        let p = built("dodecahedron");
        let cycle = euler_cycle(&p, true).unwrap();
        let points = built("icosahedron").vertices;
        let m = random_orthogonal(3, seed);
        let rotated: Vec<UnitPoint> = points
            .iter()
            .map(|x| UnitPoint::normalized(&m.apply(x.as_slice())))
            .collect();
        let beta = sphdesign::hybrid::lookup_pair("dodecahedron", "icosahedron")
            .unwrap()
            .closed_form_beta;
        let a = certify_design(Some(&cycle), Some(&points), beta, 9, 1e-10).unwrap();
        let b = certify_design(Some(&cycle.transformed(&m)), Some(&rotated), beta, 9, 1e-10).unwrap();
        prop_assert_eq!(a.certified, b.certified);
        for (x, y) in a.residuals_by_degree.iter().zip(&b.residuals_by_degree).take(10) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
