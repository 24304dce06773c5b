//! Bergman kernel and tau one-form checks: biresidue and a-period
//! normalization, the flat-torus projective connection against an
//! Eisenstein-series oracle, the pairing identity at genus 1 and 2, and the
//! scaling exponent of tau.

use num_complex::Complex64;
use spinlab_core::bergman::{
    cycle_integrals, rbr_identity, scaling_exponent, tau_one_form, BergmanKernel,
};
use spinlab_core::spinor::{
    differential_from_numerator, enumerate_characteristics, homological_coordinates, spinor,
};
use spinlab_core::surface::{
    abel_increment_local, loop_for_gap, period_matrix, HomologyMarking, HyperellipticCurve,
    PlanePath, SurfacePoint, TrackedBranch,
};
use std::f64::consts::PI;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lemniscatic() -> HyperellipticCurve {
    HyperellipticCurve::new(vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)]).unwrap()
}

fn g2_curve() -> HyperellipticCurve {
    HyperellipticCurve::new(vec![
        cx(-2.0, 0.0),
        cx(-1.0, 0.0),
        cx(-0.2, 0.0),
        cx(0.9, 0.0),
        cx(2.1, 0.0),
        cx(3.0, 0.0),
    ])
    .unwrap()
}

/// eta_1 = zeta(1/2) for the lattice Z + tau Z via the Eisenstein series
/// E_2(tau) = 1 - 24 sum sigma_1(n) q^n.
fn eta1_eisenstein(tau: Complex64) -> Complex64 {
    let q = (cx(0.0, 2.0 * PI) * tau).exp();
    let mut e2 = cx(1.0, 0.0);
    let mut qn = cx(1.0, 0.0);
    for n in 1..200 {
        qn *= q;
        let sigma1: f64 = (1..=n).filter(|d| n % d == 0).map(|d| d as f64).sum();
        e2 -= 24.0 * sigma1 * qn;
        if qn.norm() < 1e-18 {
            break;
        }
    }
    e2 * PI * PI / 6.0
}

/// Weierstrass p-function for the lattice Z + tau Z via the cotangent series.
fn weierstrass_p(z: Complex64, tau: Complex64) -> Complex64 {
    let eta1 = eta1_eisenstein(tau);
    let q = (cx(0.0, PI) * tau).exp();
    let pz = PI * z;
    let mut s = -2.0 * eta1 + (PI / pz.sin()) * (PI / pz.sin());
    let q2 = q * q;
    let mut q2n = cx(1.0, 0.0);
    for n in 1..200 {
        q2n *= q2;
        // cos(2 pi n z) for complex z
        let c = (cx(0.0, 2.0 * PI * n as f64) * z).exp();
        let cos = 0.5 * (c + c.inv());
        s -= 8.0 * PI * PI * (n as f64) * q2n / (1.0 - q2n) * cos;
        if q2n.norm() < 1e-18 {
            break;
        }
    }
    s
}

#[test]
fn weierstrass_oracle_is_consistent() {
    // p(z) - 1/z^2 = (g2/20) z^2 + O(z^4): the defect must scale like z^2
    let tau = cx(0.0, 1.0);
    let d1 = (weierstrass_p(cx(1e-2, 4e-3), tau) - cx(1e-2, 4e-3).powi(-2)).norm();
    let d2 = (weierstrass_p(cx(5e-3, 2e-3), tau) - cx(5e-3, 2e-3).powi(-2)).norm();
    let ratio = d1 / d2;
    assert!(d1 < 1e-2, "defect too large: {d1:e}");
    assert!((ratio - 4.0).abs() < 0.2, "defect does not scale like z^2: ratio {ratio}");
}

#[test]
fn biresidue_is_one() {
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let kernel = BergmanKernel::new(&pd, 1e-14).unwrap();
    let x0 = cx(0.31, 0.9);
    let y0 = curve.reference_y(x0);
    let mut ests = Vec::new();
    for r in [2e-2, 1e-2] {
        let mut acc = cx(0.0, 0.0);
        for k in 0..8 {
            let ang = 2.0 * PI * (k as f64) / 8.0;
            let y = x0 + Complex64::from_polar(r, ang);
            let seg = PlanePath::polyline(&[x0, y]);
            let tr = TrackedBranch::from_start(&seg, curve.branch_points().to_vec(), y0);
            let ylift = tr.end_value(&seg);
            let b = kernel.value_local(x0, y0, y, ylift).unwrap();
            acc += b * (x0 - y) * (x0 - y);
        }
        ests.push(acc / 8.0);
    }
    let extrap = (ests[1] * 4.0 - ests[0]) / 3.0;
    assert!(
        (extrap - 1.0).norm() < 1e-8,
        "biresidue defect {:e}",
        (extrap - 1.0).norm()
    );
}

#[test]
fn bidifferential_is_symmetric() {
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let kernel = BergmanKernel::new(&pd, 1e-14).unwrap();
    let px = SurfacePoint::regular(cx(0.4, 1.1), 1);
    let py = spinlab_core::surface::continue_sheet(&curve, &px, cx(-1.3, 0.8)).unwrap();
    let bxy = kernel.bidifferential(&px, &py, 1e-10).unwrap();
    let byx = kernel.bidifferential(&py, &px, 1e-10).unwrap();
    assert!(
        (bxy - byx).norm() < 1e-10 * bxy.norm().max(1.0),
        "symmetry defect {bxy} vs {byx}"
    );
}

#[test]
fn a_periods_of_bidifferential_vanish() {
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let kernel = BergmanKernel::new(&pd, 1e-14).unwrap();
    // fixed second argument
    let y_pt = cx(0.37, 1.42);
    let y_lift = curve.reference_y(y_pt);
    let vy = pd.basis.values_dx(y_pt, y_lift);
    // the a_1 cycle is the oriented gap loop around the first cut
    let lp = loop_for_gap(&pd, 0).unwrap();
    // walk the loop with composite Gauss panels, carrying the Abel increment
    const GX: [f64; 4] = [0.069431844202974, 0.330009478207572, 0.669990521792428, 0.930568155797026];
    const GW: [f64; 4] = [0.173927422568727, 0.326072577431273, 0.326072577431273, 0.173927422568727];
    let start = lp.path.start();
    let y_start = curve.reference_y(start);
    let tr = TrackedBranch::from_start(&lp.path, curve.branch_points().to_vec(), y_start);
    // Abel value at the loop start
    let a0 = spinlab_core::surface::abel_map(
        &pd,
        &SurfacePoint::regular(start, 1),
        &SurfacePoint::regular(y_pt, 1),
        &[],
        1e-10,
    )
    .unwrap();
    let mut total = cx(0.0, 0.0);
    let mut a_run = a0.value.clone();
    let mut x_run = start;
    let mut y_run = y_start;
    for (si, seg) in lp.path.segs.iter().enumerate() {
        let panels = 24;
        for p in 0..panels {
            for k in 0..4 {
                let t = (p as f64 + GX[k]) / panels as f64;
                let x = seg.point(t);
                let ylift = tr.value(&lp.path, si, t);
                // advance the Abel value
                let inc = abel_increment_local(&pd, x_run, y_run, x);
                for i in 0..2 {
                    a_run[i] += inc[i];
                }
                x_run = x;
                y_run = ylift;
                let vx = pd.basis.values_dx(x, ylift);
                let b = kernel.value_from_abel(&a_run, &vx, &vy).unwrap();
                total += b * seg.deriv(t) * GW[k] / panels as f64;
            }
        }
    }
    total *= lp.factor;
    assert!(total.norm() < 1e-8, "a-period of B = {total}");
}

#[test]
fn flat_torus_projective_connection_matches_eisenstein_oracle() {
    // square torus: Omega = i; S_B in the flat chart must be constant and
    // equal to 12 eta_1 = 6 pi
    let curve = lemniscatic();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-11).unwrap();
    let kernel = BergmanKernel::new(&pd, 1e-14).unwrap();
    let tau = pd.omega.matrix()[(0, 0)];
    let oracle = 12.0 * eta1_eisenstein(tau);
    let mut values = Vec::new();
    for x0 in [cx(0.4, 0.8), cx(1.3, -0.9)] {
        let ylift = curve.reference_y(x0);
        let sb_x = kernel.projective_connection_x(x0, ylift, 0.5).unwrap().value;
        // transform to the flat chart z = int v: S_flat = (S_B^x - {z; x}) / V^2
        let sz = spinlab_core::bergman::schwarzian_exact(
            &pd.basis.numerator(0),
            curve.branch_points(),
            x0,
        )
        .unwrap();
        let v = pd.basis.values_dx(x0, ylift)[0];
        values.push((sb_x - sz) / (v * v));
    }
    assert!(
        (values[0] - values[1]).norm() < 1e-8,
        "flat S_B not constant: {} vs {}",
        values[0],
        values[1]
    );
    assert!(
        (values[0] - oracle).norm() < 1e-7,
        "flat S_B {} vs oracle {}",
        values[0],
        oracle
    );
}

#[test]
fn flat_torus_bidifferential_matches_weierstrass_oracle() {
    let curve = lemniscatic();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-11).unwrap();
    let kernel = BergmanKernel::new(&pd, 1e-14).unwrap();
    let tau = pd.omega.matrix()[(0, 0)];
    let px = SurfacePoint::regular(cx(0.45, 0.7), 1);
    let py = spinlab_core::surface::continue_sheet(&curve, &px, cx(1.5, -0.6)).unwrap();
    let b_x = kernel.bidifferential(&px, &py, 1e-11).unwrap();
    // flat-chart difference z(px) - z(py) is the Abel increment
    let dz = spinlab_core::surface::abel_map(&pd, &px, &py, &[], 1e-11).unwrap().value[0];
    // B_flat = B_x / (V(px) V(py))
    let vx = pd.basis.values_dx(curve.x_of(&px).unwrap(), curve.y_of(&px).unwrap())[0];
    let vy = pd.basis.values_dx(curve.x_of(&py).unwrap(), curve.y_of(&py).unwrap())[0];
    let b_flat = b_x / (vx * vy);
    let oracle = weierstrass_p(dz, tau) + 2.0 * eta1_eisenstein(tau);
    assert!(
        (b_flat - oracle).norm() < 1e-6 * oracle.norm().max(1.0),
        "B_flat {} vs p-oracle {}",
        b_flat,
        oracle
    );
}

#[test]
fn pairing_identity_trivial_at_genus_1() {
    // v = dz has no zeros: the right-hand side is zero and the a/b pairing
    // cancels the S_B constant exactly
    let curve = lemniscatic();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-11).unwrap();
    let eta = spinlab_core::theta::Characteristic::new(vec![1, 1]).unwrap();
    let sq = spinor(&pd, &eta, 1e-13).unwrap();
    let point = tau_one_form(&pd, &sq, 1e-13, 3e-8).unwrap();
    let rep = rbr_identity(&point);
    assert!(rep.rhs.norm() < 1e-14);
    assert!(
        rep.defect < 1e-6,
        "genus-1 pairing defect {:e} (lhs {})",
        rep.defect,
        rep.lhs
    );
}

#[test]
fn pairing_identity_for_g2_spinor_square() {
    // one double zero: rhs = -pi i (1 + 2 - 1/3) = -(8/3) pi i
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let eta = &enumerate_characteristics(2, 1)[0];
    let sq = spinor(&pd, eta, 1e-13).unwrap();
    let point = tau_one_form(&pd, &sq, 1e-13, 3e-8).unwrap();
    let rep = rbr_identity(&point);
    let expect = cx(0.0, -PI * 8.0 / 3.0);
    assert!((rep.rhs - expect).norm() < 1e-12);
    assert!(
        rep.defect < 1e-4,
        "g2 spinor pairing defect {:e}: lhs {} rhs {}",
        rep.defect,
        rep.lhs,
        rep.rhs
    );
    // single pole: its residue must vanish (residue theorem)
    assert!(point.residues[0].norm() < 1e-5, "residue {}", point.residues[0]);
}

#[test]
fn pairing_identity_for_g2_simple_zeros() {
    // holomorphic differential with two simple zeros: rhs = -3 pi i
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let sq = differential_from_numerator(&pd, vec![cx(0.45, 0.35), cx(1.0, 0.0)]);
    assert_eq!(sq.zeros.len(), 2, "zeros: {:?}", sq.zeros);
    assert!(sq.zeros.iter().all(|z| z.multiplicity == 1));
    let point = tau_one_form(&pd, &sq, 1e-13, 3e-8).unwrap();
    let rep = rbr_identity(&point);
    let expect = cx(0.0, -PI * 3.0);
    assert!((rep.rhs - expect).norm() < 1e-12);
    assert!(
        rep.defect < 1e-4,
        "g2 simple-zero pairing defect {:e}: lhs {} rhs {}",
        rep.defect,
        rep.lhs,
        rep.rhs
    );
    // two poles: residues are opposite
    assert!(
        (point.residues[0] + point.residues[1]).norm() < 1e-5,
        "residues {:?}",
        point.residues
    );
}

#[test]
fn contour_deformation_invariance() {
    // two homotopic stadium loops give the same q-integral
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let eta = &enumerate_characteristics(2, 1)[1];
    let sq = spinor(&pd, eta, 1e-13).unwrap();
    let coords = homological_coordinates(&pd, &sq, 1e-10).unwrap();
    let kernel = BergmanKernel::new(&pd, 1e-14).unwrap();
    let i1 = cycle_integrals(&kernel, &sq, &coords, 5e-8).unwrap();
    let i2 = cycle_integrals(&kernel, &sq, &coords, 1e-8).unwrap();
    for k in 0..4 {
        assert!(
            (i1.values[k] - i2.values[k]).norm() < 1e-7,
            "refinement instability at {k}: {} vs {}",
            i1.values[k],
            i2.values[k]
        );
    }
}

#[test]
fn scaling_path_gives_homogeneity_exponent_g2() {
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let eta = &enumerate_characteristics(2, 1)[0];
    let (exp, err) = scaling_exponent(&pd, eta, 1e-13, 3e-8, 6).unwrap();
    assert!(
        (exp - 16.0).norm() < 2e-3,
        "scaling exponent {exp} (est err {err:e})"
    );
}

#[test]
fn dlogtau_is_exact_around_a_contractible_loop() {
    // move one branch point around a small circle and come back: the one-form
    // integrates to zero
    let base = [
        cx(-2.0, 0.0),
        cx(-1.0, 0.0),
        cx(-0.2, 0.0),
        cx(0.9, 0.0),
        cx(2.1, 0.0),
        cx(3.0, 0.0),
    ];
    let eta = enumerate_characteristics(2, 1)[0].clone();
    let n = 12;
    let mut points = Vec::new();
    for k in 0..=n {
        let ang = 2.0 * PI * (k as f64) / (n as f64);
        let mut pts = base.to_vec();
        pts[5] = base[5] + Complex64::from_polar(0.05, ang) - 0.05;
        let curve = spinlab_core::surface::HyperellipticCurve::new(pts).unwrap();
        let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
        let sq = spinor(&pd, &eta, 1e-13).unwrap();
        points.push(
            spinlab_core::bergman::tau_one_form_opts(
                &pd,
                &sq,
                spinlab_core::bergman::TauOpts {
                    theta_tol: 1e-13,
                    contour: spinlab_core::bergman::ContourOpts {
                        quad_tol: 1e-8,
                        rel_tol: 2e-7,
                    },
                    fast_stencil: false,
                },
            )
            .unwrap(),
        );
    }
    let (delta, est) = spinlab_core::bergman::integrate_dlogtau(&points).unwrap();
    assert!(
        delta.norm() < 1e-5,
        "closed-loop delta log tau = {delta} (step estimate {est:e})"
    );
    // reversing the path negates the integral (exactly up to summation order)
    points.reverse();
    let (back, _) = spinlab_core::bergman::integrate_dlogtau(&points).unwrap();
    assert!((delta + back).norm() < 1e-13);
}

#[test]
fn dlogtau_around_a_braid_matches_the_modular_weight_mod_2pi_i() {
    // transport the curve around a half-turn of two branch points: the curve
    // returns to itself with the marking changed by an integer symplectic
    // map, and the accumulated delta log tau differs from 72 log det(s12
    // Omega + s11) by an integer multiple of 2 pi i
    // the rotating pair sits off the real axis and occupies the last chain
    // slots, so the chain tangents stay transversal along the whole braid
    let center = cx(1.5, 1.2);
    let radius = 0.5;
    let others = [cx(-2.0, 0.0), cx(-1.0, 0.0), cx(-0.2, 0.0), cx(3.4, 0.0)];
    let eta = enumerate_characteristics(2, 1)[0].clone();
    let n = 16;
    let mut points = Vec::new();
    let mut first_pd = None;
    let mut last_pd = None;
    for k in 0..=n {
        let ang = PI * (k as f64) / (n as f64);
        let mut pts = others.to_vec();
        pts.push(center + Complex64::from_polar(radius, ang));
        pts.push(center - Complex64::from_polar(radius, ang));
        // keep the labeling fixed along the braid: no re-sorting
        let curve = spinlab_core::surface::HyperellipticCurve::with_order(pts, 1e-9).unwrap();
        let marking = HomologyMarking::standard(&curve);
        let pd = period_matrix(&curve, &marking, 1e-10).unwrap();
        let sq = spinor(&pd, &eta, 1e-13).unwrap();
        points.push(
            spinlab_core::bergman::tau_one_form_opts(
                &pd,
                &sq,
                spinlab_core::bergman::TauOpts {
                    theta_tol: 1e-13,
                    contour: spinlab_core::bergman::ContourOpts {
                        quad_tol: 1e-8,
                        rel_tol: 2e-7,
                    },
                    fast_stencil: false,
                },
            )
            .unwrap(),
        );
        if k == 0 {
            first_pd = Some(pd);
        } else if k == n {
            last_pd = Some(pd);
        }
    }
    let (delta, est) = spinlab_core::bergman::integrate_dlogtau(&points).unwrap();
    // the end marking differs from the start marking by the braid action
    let pd0 = first_pd.unwrap();
    let pd1 = last_pd.unwrap();
    let sigma = spinlab_core::surface::marking_change_between(&pd1, &pd0).unwrap();
    let (_, _, aut) =
        spinlab_core::theta::symplectic_transform(&sigma, &pd1.omega, &eta).unwrap();
    let expect = 72.0 * aut.ln();
    let diff = (delta - expect) / cx(0.0, 2.0 * PI);
    let frac = (diff.re - diff.re.round()).abs() + diff.im.abs();
    assert!(
        frac < 1e-3,
        "delta {delta} vs 72 log det {expect}: offset {diff} not an integer multiple of 2 pi i (est {est:e})"
    );
}
