//! Spinor structure: characteristic counts, the genus-2 odd-spinor /
//! Weierstrass-point bijection and zero multiplicities.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use spinlab_core::spinor::{
    enumerate_characteristics, homological_coordinates, spinor, SpinorError,
};
use spinlab_core::surface::{period_matrix, HomologyMarking, HyperellipticCurve, SurfacePoint};
use spinlab_core::theta::Characteristic;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn characteristic_counts() {
    assert_eq!(enumerate_characteristics(1, 1).len(), 1);
    assert_eq!(enumerate_characteristics(1, 1)[0].bits(), &[1, 1]);
    assert_eq!(enumerate_characteristics(2, 1).len(), 6);
    assert_eq!(enumerate_characteristics(2, 0).len(), 10);
    assert_eq!(enumerate_characteristics(3, 1).len(), 28);
}

#[test]
fn even_characteristic_is_rejected() {
    let curve = HyperellipticCurve::new(vec![
        cx(0.0, 0.0),
        cx(1.0, 0.0),
        cx(2.0, 0.0),
        cx(3.0, 0.0),
    ])
    .unwrap();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let even = Characteristic::zero(1);
    assert!(matches!(
        spinor(&pd, &even, 1e-12),
        Err(SpinorError::EvenCharacteristic)
    ));
}

#[test]
fn g1_spinor_is_nonzero_constant_times_dz() {
    let curve = HyperellipticCurve::new(vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)]).unwrap();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let odd = Characteristic::new(vec![1, 1]).unwrap();
    let sq = spinor(&pd, &odd, 1e-12).unwrap();
    assert!(sq.coeffs[0].norm() > 0.5, "theta' at 0 should be O(1)");
    // genus 1: no zeros at finite points or infinity (2g-2 = 0)
    assert!(sq.zeros.is_empty());
}

fn random_g2_curve(rng: &mut impl Rng) -> HyperellipticCurve {
    loop {
        let pts: Vec<Complex64> = (0..6)
            .map(|_| cx(rng.gen_range(-3.0..3.0), rng.gen_range(-1.2..1.2)))
            .collect();
        let mut ok = true;
        for i in 0..6 {
            for j in (i + 1)..6 {
                if (pts[i] - pts[j]).norm() < 0.4 {
                    ok = false;
                }
            }
        }
        if ok {
            if let Ok(c) = HyperellipticCurve::new(pts) {
                return c;
            }
        }
    }
}

#[test]
fn g2_odd_spinors_biject_with_weierstrass_points() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(77);
    let curve = random_g2_curve(&mut rng);
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let mut hit = vec![false; 6];
    for eta in enumerate_characteristics(2, 1) {
        let sq = spinor(&pd, &eta, 1e-13).unwrap();
        assert_eq!(sq.zeros.len(), 1, "one double zero for {:?}", eta.bits());
        let z = &sq.zeros[0];
        assert_eq!(z.multiplicity, 2);
        match z.point {
            SurfacePoint::Branch { index } => {
                assert!(!hit[index], "branch point {index} hit twice");
                hit[index] = true;
                // zero-location defect: the numerator root is at the branch point
                let root = -sq.numerator[0] / sq.numerator[1];
                let defect = (root - curve.branch_points()[index]).norm();
                assert!(defect < 1e-6, "zero-location defect {defect:e}");
            }
            ref other => panic!("expected a Weierstrass double zero, got {other:?}"),
        }
    }
    assert!(hit.iter().all(|&b| b), "bijection onto all six Weierstrass points");
}

#[test]
fn total_multiplicity_is_2g_minus_2_for_random_curves() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(1234);
    // g = 2 sample
    for _ in 0..6 {
        let curve = random_g2_curve(&mut rng);
        let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-9).unwrap();
        let eta = &enumerate_characteristics(2, 1)[rng.gen_range(0..6)];
        let sq = spinor(&pd, eta, 1e-12).unwrap();
        let total: usize = sq.zeros.iter().map(|z| z.multiplicity).sum();
        assert_eq!(total, 2);
        assert!(!sq.odd_multiplicity_diagnostic);
    }
    // g = 3 sample on a structured curve family
    for k in 0..4 {
        let o = 0.13 * k as f64;
        let pts: Vec<Complex64> = (0..8)
            .map(|i| cx(i as f64 + 0.21 * ((i * i) as f64).sin(), o * (i as f64 - 3.5) * 0.1))
            .collect();
        let curve = HyperellipticCurve::new(pts).unwrap();
        let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-9).unwrap();
        let eta = &enumerate_characteristics(3, 1)[k + 3];
        let sq = spinor(&pd, eta, 1e-12).unwrap();
        let total: usize = sq.zeros.iter().map(|z| z.multiplicity).sum();
        assert_eq!(total, 4, "g=3 total multiplicity for {:?}", eta.bits());
        assert!(!sq.odd_multiplicity_diagnostic);
    }
}

#[test]
fn merged_double_zeros_flag_a_cluster() {
    // genus 3 curve with two branch points close together; the odd
    // characteristic whose zero pair is that branch pair shows one zero of
    // multiplicity 4 with the cluster diagnostic
    let d = 3e-5;
    let pts = vec![
        cx(0.0, 0.0),
        cx(1.0, 0.0),
        cx(2.0, 0.0),
        cx(3.0, 0.0),
        cx(4.0, 0.0),
        cx(5.0, 0.0),
        cx(6.0, 0.0),
        cx(6.0 + d, 0.0),
    ];
    let curve = HyperellipticCurve::with_threshold(pts, 1e-9).unwrap();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-9).unwrap();
    let mut seen_merged = false;
    for eta in enumerate_characteristics(3, 1) {
        let sq = match spinor(&pd, &eta, 1e-12) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if sq.zeros.len() == 1 && sq.zeros[0].multiplicity == 4 {
            assert!(sq.zeros[0].cluster, "merged pair should carry the cluster flag");
            assert!(sq.has_cluster);
            seen_merged = true;
        }
    }
    assert!(seen_merged, "some characteristic has its zero pair at the colliding branch points");
}

#[test]
fn homological_coordinates_structure() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(4);
    let curve = random_g2_curve(&mut rng);
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let eta = &enumerate_characteristics(2, 1)[0];
    let sq = spinor(&pd, eta, 1e-13).unwrap();
    let coords = homological_coordinates(&pd, &sq, 1e-10).unwrap();
    // g=2: exactly 3g-2 = 4 coordinates, no relative paths
    assert_eq!(coords.z.len(), 4);
    assert_eq!(coords.relative_paths.len(), 0);
    // a-periods equal the gradient coefficients by normalization
    for j in 0..2 {
        assert!((coords.z[j] - sq.coeffs[j]).norm() < 1e-12);
    }
    // scaling the spinor scales every coordinate exactly
    let sq2 = spinlab_core::spinor::spinor_scaled(&pd, eta, 1e-13, cx(2.0, 0.5)).unwrap();
    let coords2 = homological_coordinates(&pd, &sq2, 1e-10).unwrap();
    for k in 0..4 {
        let want = coords.z[k] * cx(2.0, 0.5);
        assert!(
            (coords2.z[k] - want).norm() < 1e-8 * want.norm().max(1e-8),
            "coordinate {k} scaling"
        );
    }
}

#[test]
fn g3_coordinates_include_relative_period() {
    let pts: Vec<Complex64> = (0..8).map(|i| cx(i as f64, 0.0)).collect();
    let curve = HyperellipticCurve::new(pts).unwrap();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-9).unwrap();
    let eta = &enumerate_characteristics(3, 1)[0];
    let sq = spinor(&pd, eta, 1e-12).unwrap();
    let coords = homological_coordinates(&pd, &sq, 1e-9).unwrap();
    assert_eq!(coords.z.len(), 7);
    assert_eq!(coords.relative_paths.len(), 1);
    assert!(coords.z[6].norm() > 1e-10, "relative period should be nonzero");
}
