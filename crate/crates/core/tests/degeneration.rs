//! Degenerating families: period-matrix expansions, theta and spinor boundary
//! exponents, and the marking-transport root of unity.

use num_complex::Complex64;
use spinlab_core::degen::{
    check_spinor_degeneration, check_theta_degeneration, irreducible_family, marking_twist_ratio,
    reducible_family, reducible_first_order, SpinorRegime, ThetaRegime,
};
use spinlab_core::spinor::{enumerate_characteristics, spinor};
use spinlab_core::surface::SurfacePoint;
use spinlab_core::theta::Characteristic;
use spinlab_core::util::linear_fit_complex;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn geometric(t0: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t0 * ratio.powi(k as i32)).collect()
}

/// The genus-2 collision family y^2 = (x^2 - t)(x^2 - 1)(x^2 - 4).
fn irr_g2(n: usize) -> spinlab_core::degen::DegenerationFamily {
    irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, n),
        1e-10,
    )
    .unwrap()
}

#[test]
fn irreducible_period_matrix_has_log_singularity() {
    let fam = irr_g2(10);
    let g = fam.genus;
    // Omega_gg = m * log t / (2 pi i) + c with slope m = 1
    let xs: Vec<f64> = fam.points.iter().map(|p| p.plumbing.ln()).collect();
    let ys: Vec<Complex64> = fam
        .points
        .iter()
        .map(|p| p.pd.omega.matrix()[(g - 1, g - 1)] * cx(0.0, 2.0 * std::f64::consts::PI))
        .collect();
    let (slope, _, resid) = linear_fit_complex(&xs, &ys);
    assert!(
        (slope - 1.0).norm() < 0.02,
        "log-slope of Omega_gg: {slope} (resid {resid:e})"
    );
    // the other entries converge to the limit with O(t) rate
    let limit = fam.limit.outer.as_ref().unwrap().omega.matrix().clone();
    let params: Vec<f64> = fam.points.iter().map(|p| p.plumbing).collect();
    for i in 0..g - 1 {
        for j in 0..g - 1 {
            let vals: Vec<f64> = fam
                .points
                .iter()
                .map(|p| (p.pd.omega.matrix()[(i, j)] - limit[(i, j)]).norm())
                .collect();
            let fit = spinlab_core::degen::fit_exponent(&params, &vals, 1e-11);
            assert!(
                fit.slope >= 0.9,
                "entry ({i},{j}) converges with slope {}",
                fit.slope
            );
        }
    }
}

/// The genus-2 reducible family: cluster {0, s, 2.2 s} and {6, 7.5, 9}.
fn red_g2(n: usize) -> spinlab_core::degen::DegenerationFamily {
    reducible_family(
        vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.2, 0.0)],
        vec![cx(6.0, 0.0), cx(7.5, 0.0), cx(9.0, 0.0)],
        1,
        geometric(1e-2, 0.5, n),
        1e-10,
    )
    .unwrap()
}

#[test]
fn reducible_period_matrix_first_order() {
    let fam = red_g2(9);
    let rep = reducible_first_order(&fam).unwrap();
    assert!(
        (rep.offdiag_slope.slope - 1.0).abs() < 0.1,
        "off-diagonal slope {} (confidence {:e})",
        rep.offdiag_slope.slope,
        rep.offdiag_slope.confidence
    );
    assert!(
        rep.singular_ratio < 0.05,
        "rank-1 singular ratio {}",
        rep.singular_ratio
    );
    assert!(
        rep.outer_product_defect < 0.1,
        "outer-product defect {}",
        rep.outer_product_defect
    );
}

#[test]
fn theta_reducible_residual_is_second_order() {
    let fam = red_g2(9);
    // odd = odd (x) even on the two blocks
    let eta = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    assert!(eta.is_odd());
    let w = [cx(0.13, 0.05), cx(-0.07, 0.11)];
    let fit =
        check_theta_degeneration(&fam, &eta, &w, ThetaRegime::ReducibleSecondOrder, 1e-13).unwrap();
    assert!(
        (fit.slope - 2.0).abs() < 0.1,
        "residual slope {} (confidence {:e})",
        fit.slope,
        fit.confidence
    );
}

#[test]
fn theta_irreducible_odd_pinch_eighth_root() {
    let fam = irr_g2(12);
    // pinched top bit set on the last handle; even overall parity also works
    let eta = Characteristic::new(vec![0, 0, 1, 0]).unwrap();
    let w = [cx(0.21, 0.03), cx(0.12, -0.04)];
    let fit =
        check_theta_degeneration(&fam, &eta, &w, ThetaRegime::IrreducibleOddPinch, 1e-13).unwrap();
    assert!(
        (fit.slope - 0.125).abs() < 0.01,
        "odd-pinch slope {} (confidence {:e})",
        fit.slope,
        fit.confidence
    );
}

#[test]
fn theta_irreducible_even_pinch_sqrt_correction() {
    let fam = irr_g2(12);
    let eta = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    let w = [cx(0.21, 0.03), cx(0.12, -0.04)];
    let fit =
        check_theta_degeneration(&fam, &eta, &w, ThetaRegime::IrreducibleEvenPinch, 1e-13).unwrap();
    assert!(
        (fit.slope - 0.5).abs() < 0.05,
        "even-pinch correction slope {} (confidence {:e})",
        fit.slope,
        fit.confidence
    );
}

#[test]
fn spinor_reducible_sides() {
    let fam = red_g2(9);
    // odd (+) even split characteristic
    let eta = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    let outer =
        check_spinor_degeneration(&fam, &eta, cx(8.2, 0.6), SpinorRegime::ReducibleOuterLinear, 1e-13)
            .unwrap();
    assert!(
        (outer.slope - 1.0).abs() < 0.05,
        "outer-side slope {} (confidence {:e})",
        outer.slope,
        outer.confidence
    );
    // inner compact: u fixed in the cluster chart
    let inner = check_spinor_degeneration(
        &fam,
        &eta,
        cx(0.45, 0.7),
        SpinorRegime::ReducibleInnerConstant,
        1e-13,
    )
    .unwrap();
    assert!(
        inner.slope.abs() < 0.05,
        "inner-side slope {} (confidence {:e})",
        inner.slope,
        inner.confidence
    );
}

#[test]
fn spinor_irreducible_regimes() {
    let fam = irr_g2(12);
    // delta = 1 regime: odd characteristic with pinched top bit
    let odd_pinch = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| c.top(1) == 1 && {
            // keep the zero away from the collision region
            let sq = spinor(&fam.points[0].pd, c, 1e-12).unwrap();
            match sq.zeros[0].point {
                SurfacePoint::Branch { index } => index < 2 || index > 3,
                _ => true,
            }
        })
        .unwrap();
    let fit = check_spinor_degeneration(
        &fam,
        &odd_pinch,
        cx(0.4, 0.9),
        SpinorRegime::IrreducibleOddPinch,
        1e-13,
    )
    .unwrap();
    assert!(
        (fit.slope - 0.125).abs() < 0.02,
        "odd-pinch spinor slope {} for {:?} (confidence {:e})",
        fit.slope,
        odd_pinch.bits(),
        fit.confidence
    );
    // delta = 0 regime: sqrt(t) correction; the spinor's double zero migrates
    // into the node for these characteristics, which is fine away from it
    let even_pinch = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| c.top(1) == 0)
        .unwrap();
    let fit = check_spinor_degeneration(
        &fam,
        &even_pinch,
        cx(0.4, 0.9),
        SpinorRegime::IrreducibleEvenPinchCorrection,
        1e-13,
    )
    .unwrap();
    assert!(
        (fit.slope - 1.0).abs() < 0.05,
        "even-pinch correction slope in r: {} for {:?} (confidence {:e})",
        fit.slope,
        even_pinch.bits(),
        fit.confidence
    );
}

#[test]
fn marking_transport_multiplies_spinor_by_eighth_root() {
    let fam = irr_g2(4);
    let eta = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| c.top(1) == 1)
        .unwrap();
    let worst = marking_twist_ratio(&fam.points[1].pd, &eta, 1e-13).unwrap();
    assert!(worst < 1e-6, "eighth-power ratio defect {worst:e}");
}
