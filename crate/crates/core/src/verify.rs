//! The acceptance suite: every verification criterion as a runnable check,
//! shared by the integration tests and the batch front-end.

use crate::bergman::{rbr_identity, scaling_exponent, tau_one_form_opts, ContourOpts, TauOpts};
use crate::degen::{
    check_spinor_degeneration, check_theta_degeneration, fit_tau_boundary_exponent,
    irreducible_family, reducible_family, reducible_first_order, zg_family, SpinorRegime,
    TauBoundary, ThetaRegime,
};
use crate::picard::{
    farkas_closed_form, matches_closed_form, solve_farkas, solve_theta_null, ExponentTable, Rat,
};
use crate::spinor::{enumerate_characteristics, spinor, spinor_scaled};
use crate::surface::{period_matrix, HomologyMarking, HyperellipticCurve, SurfacePoint};
use crate::theta::{
    all_characteristics, random_symplectic, symplectic_transform, theta, Characteristic,
    PeriodMatrix,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// genus <= 2 where possible; minutes
    Quick,
    /// everything, including the genus-3 runs and the boundary exponents
    Full,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2}: {} - {} ({})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

fn geometric(t0: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t0 * ratio.powi(k as i32)).collect()
}

fn random_period_matrix(g: usize, rng: &mut impl Rng) -> PeriodMatrix {
    let mut re = DMatrix::<f64>::zeros(g, g);
    let mut l = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in 0..=i {
            let v = rng.gen_range(-0.4..0.4);
            re[(i, j)] = v;
            re[(j, i)] = v;
            l[(i, j)] = rng.gen_range(-0.5..0.5);
        }
        l[(i, i)] += 1.0;
    }
    let im = &l * l.transpose();
    PeriodMatrix::new(
        DMatrix::from_fn(g, g, |i, j| cx(re[(i, j)], im[(i, j)])),
        1e-12,
    )
    .unwrap()
}

fn random_curve(g: usize, rng: &mut impl Rng) -> HyperellipticCurve {
    loop {
        let pts: Vec<Complex64> = (0..2 * g + 2)
            .map(|_| cx(rng.gen_range(-3.0..3.0), rng.gen_range(-1.2..1.2)))
            .collect();
        let mut ok = true;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
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

/// Criterion 1: theta correctness (odd vanishing, quasiperiodicity, eighth
/// power modularity, brute-force reference value).
pub fn criterion_1(seed: u64) -> CriterionResult {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    // reference value at g=1
    let om1 = PeriodMatrix::new(DMatrix::from_row_slice(1, 1, &[cx(0.0, 1.0)]), 1e-12).unwrap();
    let v = theta(&Characteristic::zero(1), &om1, &[cx(0.0, 0.0)], 1e-13)
        .unwrap()
        .value;
    let brute: f64 = (-40i64..=40).map(|n| (-PI * (n * n) as f64).exp()).sum();
    let ref_defect = (v.re - brute).abs().max(v.im.abs());
    let mut pass = ref_defect < 1e-12;
    notes.push(format!("reference {ref_defect:.1e}"));
    for g in 1..=3 {
        let om = random_period_matrix(g, &mut rng);
        let zero = vec![cx(0.0, 0.0); g];
        // odd vanishing
        for eta in all_characteristics(g).iter().filter(|c| c.is_odd()) {
            let t = theta(eta, &om, &zero, 1e-12).unwrap();
            worst = worst.max(t.value.norm());
        }
        // quasiperiodicity at a nontrivial shift
        let eta = all_characteristics(g)[1].clone();
        let w: Vec<Complex64> = (0..g).map(|i| cx(0.1 + 0.04 * i as f64, 0.06)).collect();
        let m: Vec<f64> = (0..g).map(|i| ((i % 2) as f64) + 1.0).collect();
        let n: Vec<f64> = (0..g).map(|i| 1.0 - ((i % 2) as f64) * 2.0).collect();
        let mut shifted = w.clone();
        let mut m_om_m = cx(0.0, 0.0);
        let mut m_dot = cx(0.0, 0.0);
        let mut a_n = 0.0;
        let (a, b) = (eta.shift_top(), eta.shift_bottom());
        for i in 0..g {
            for jj in 0..g {
                shifted[i] += om.matrix()[(i, jj)] * m[jj];
                m_om_m += om.matrix()[(i, jj)] * m[i] * m[jj];
            }
            shifted[i] += n[i];
            m_dot += (w[i] + b[i]) * m[i];
            a_n += a[i] * n[i];
        }
        let lhs = theta(&eta, &om, &shifted, 1e-12).unwrap().value;
        let phase = (cx(0.0, -PI) * m_om_m - cx(0.0, 2.0 * PI) * m_dot + cx(0.0, 2.0 * PI * a_n)).exp();
        let rhs = phase * theta(&eta, &om, &w, 1e-12).unwrap().value;
        let qp = (lhs - rhs).norm() / rhs.norm().max(1.0);
        worst = worst.max(qp);
        // eighth-power modularity
        let evens: Vec<Characteristic> = all_characteristics(g)
            .into_iter()
            .filter(|c| !c.is_odd())
            .collect();
        for k in 0..3 {
            let sigma = random_symplectic(g, 3, &mut rng);
            let eta = &evens[(k * 3 + g) % evens.len()];
            let (om2, eta2, aut) = symplectic_transform(&sigma, &om, eta).unwrap();
            let t1 = theta(eta, &om, &zero, 1e-13).unwrap().value;
            let t2 = theta(&eta2, &om2, &zero, 1e-13).unwrap().value;
            let rel = (t2.powu(8) - aut.powu(4) * t1.powu(8)).norm() / (aut.powu(4) * t1.powu(8)).norm();
            worst = worst.max(rel);
        }
    }
    pass = pass && worst < 1e-8;
    notes.push(format!("worst defect {worst:.1e}"));
    CriterionResult {
        id: 1,
        name: "theta correctness".into(),
        passed: pass,
        details: notes.join(", "),
    }
}

/// Criterion 2: periods (lemniscatic oracle, Riemann relations on 50 random
/// genus-2 curves).
pub fn criterion_2(seed: u64) -> CriterionResult {
    let curve =
        HyperellipticCurve::new(vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)]).unwrap();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-11).unwrap();
    let lem = (pd.omega.matrix()[(0, 0)] - cx(0.0, 1.0)).norm();
    let mut pass = lem < 1e-8;
    let mut worst_sym = 0.0_f64;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed.wrapping_add(2));
    let mut count = 0;
    while count < 50 {
        let curve = random_curve(2, &mut rng);
        match period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10) {
            Ok(pd) => {
                worst_sym = worst_sym.max(pd.symmetry_defect);
                if pd.omega.min_im_eigenvalue() <= 0.0 {
                    pass = false;
                }
                count += 1;
            }
            Err(e) => {
                return CriterionResult {
                    id: 2,
                    name: "period matrices".into(),
                    passed: false,
                    details: format!("random curve failed: {e}"),
                }
            }
        }
    }
    pass = pass && worst_sym < 1e-8;
    CriterionResult {
        id: 2,
        name: "period matrices".into(),
        passed: pass,
        details: format!("lemniscatic defect {lem:.1e}, worst symmetry {worst_sym:.1e} over 50 curves"),
    }
}

/// Criterion 3: six odd spinors biject onto the six Weierstrass points.
pub fn criterion_3(seed: u64) -> CriterionResult {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed.wrapping_add(3));
    let curve = random_curve(2, &mut rng);
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let mut hit = vec![false; 6];
    let mut worst = 0.0_f64;
    for eta in enumerate_characteristics(2, 1) {
        let sq = match spinor(&pd, &eta, 1e-13) {
            Ok(s) => s,
            Err(e) => {
                return CriterionResult {
                    id: 3,
                    name: "spinor structure".into(),
                    passed: false,
                    details: format!("spinor failed: {e}"),
                }
            }
        };
        if sq.zeros.len() != 1 || sq.zeros[0].multiplicity != 2 {
            return CriterionResult {
                id: 3,
                name: "spinor structure".into(),
                passed: false,
                details: format!("zero divisor {:?}", sq.zeros),
            };
        }
        match sq.zeros[0].point {
            SurfacePoint::Branch { index } => {
                let root = -sq.numerator[0] / sq.numerator[1];
                worst = worst.max((root - curve.branch_points()[index]).norm());
                hit[index] = true;
            }
            _ => {
                return CriterionResult {
                    id: 3,
                    name: "spinor structure".into(),
                    passed: false,
                    details: "zero away from the Weierstrass points".into(),
                }
            }
        }
    }
    let pass = hit.iter().all(|&b| b) && worst < 1e-6;
    CriterionResult {
        id: 3,
        name: "spinor structure".into(),
        passed: pass,
        details: format!("bijective onto 6 Weierstrass points, worst location defect {worst:.1e}"),
    }
}

fn acceptance_g2_curve() -> HyperellipticCurve {
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

/// Criterion 4: the pairing identity for a genus-2 spinor square and a
/// genus-2 differential with simple zeros.
pub fn criterion_4(_seed: u64) -> CriterionResult {
    let curve = acceptance_g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let opts = TauOpts {
        theta_tol: 1e-13,
        contour: ContourOpts {
            quad_tol: 3e-8,
            rel_tol: 2e-7,
        },
        fast_stencil: false,
    };
    let eta = &enumerate_characteristics(2, 1)[0];
    let sq = spinor(&pd, eta, 1e-13).unwrap();
    let p1 = tau_one_form_opts(&pd, &sq, opts).unwrap();
    let r1 = rbr_identity(&p1);
    let ok1 = r1.defect < 1e-4 && (r1.rhs - cx(0.0, -8.0 * PI / 3.0)).norm() < 1e-10;
    let sq2 = crate::spinor::differential_from_numerator(&pd, vec![cx(0.45, 0.35), cx(1.0, 0.0)]);
    let p2 = tau_one_form_opts(&pd, &sq2, opts).unwrap();
    let r2 = rbr_identity(&p2);
    let ok2 = r2.defect < 1e-4 && (r2.rhs - cx(0.0, -3.0 * PI)).norm() < 1e-10;
    CriterionResult {
        id: 4,
        name: "pairing identity".into(),
        passed: ok1 && ok2,
        details: format!(
            "double-zero defect {:.1e} (rhs -(8/3)pi i), simple-zero defect {:.1e} (rhs -3 pi i)",
            r1.defect, r2.defect
        ),
    }
}

/// Criterion 5: tau homogeneity exponent 16(g-1) from the scaling path.
pub fn criterion_5(level: Level, _seed: u64) -> CriterionResult {
    let curve = acceptance_g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let eta = &enumerate_characteristics(2, 1)[0];
    let (e2, err2) = scaling_exponent(&pd, eta, 1e-13, 3e-8, 6).unwrap();
    let d2 = (e2 - 16.0).norm() / 16.0;
    let mut pass = d2 < 1e-3;
    let mut details = format!("g=2 exponent {:.6} (rel {:.1e}, est {:.0e})", e2.re, d2, err2);
    if level == Level::Full {
        let pts: Vec<Complex64> = vec![
            cx(-3.2, 0.0),
            cx(-2.1, 0.0),
            cx(-1.05, 0.0),
            cx(-0.1, 0.0),
            cx(0.95, 0.0),
            cx(1.9, 0.0),
            cx(2.8, 0.0),
            cx(3.9, 0.0),
        ];
        let curve3 = HyperellipticCurve::new(pts).unwrap();
        let pd3 = period_matrix(&curve3, &HomologyMarking::standard(&curve3), 1e-10).unwrap();
        let eta3 = &enumerate_characteristics(3, 1)[0];
        let (e3, _) = scaling_exponent(&pd3, eta3, 1e-12, 3e-8, 6).unwrap();
        let d3 = (e3 - 32.0).norm() / 32.0;
        pass = pass && d3 < 1e-3;
        details.push_str(&format!(", g=3 exponent {:.6} (rel {:.1e})", e3.re, d3));
    }
    CriterionResult {
        id: 5,
        name: "tau homogeneity".into(),
        passed: pass,
        details,
    }
}

/// Criterion 6: degeneration of period matrices (log slope of the pinched
/// entry; rank-1 first-order cross block).
pub fn criterion_6(_seed: u64) -> CriterionResult {
    let fam = irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, 10),
        1e-10,
    )
    .unwrap();
    let g = fam.genus;
    let xs: Vec<f64> = fam.points.iter().map(|p| p.plumbing.ln()).collect();
    let ys: Vec<Complex64> = fam
        .points
        .iter()
        .map(|p| p.pd.omega.matrix()[(g - 1, g - 1)] * cx(0.0, 2.0 * PI))
        .collect();
    let (slope, _, _) = crate::util::linear_fit_complex(&xs, &ys);
    let ok_log = (slope - 1.0).norm() < 0.02;
    // rank-1 cross block needs both blocks of dimension >= 2: genus 4, j = 2
    let fam4 = reducible_family(
        vec![cx(0.0, 0.0), cx(0.8, 0.0), cx(1.7, 0.0), cx(2.6, 0.0), cx(3.4, 0.0)],
        vec![cx(9.0, 0.0), cx(10.5, 0.0), cx(12.0, 0.0), cx(13.5, 0.0), cx(15.0, 0.0)],
        2,
        geometric(4e-3, 0.5, 6),
        1e-9,
    )
    .unwrap();
    let rep = reducible_first_order(&fam4).unwrap();
    let ok_rank = rep.singular_ratio < 0.05 && (rep.offdiag_slope.slope - 1.0).abs() < 0.1;
    CriterionResult {
        id: 6,
        name: "period degeneration".into(),
        passed: ok_log && ok_rank,
        details: format!(
            "log-slope {:.4}, off-diagonal slope {:.3}, singular ratio {:.2e}, outer-product defect {:.1e}",
            slope.re, rep.offdiag_slope.slope, rep.singular_ratio, rep.outer_product_defect
        ),
    }
}

/// Criterion 7: theta degeneration exponents (second-order residual, odd and
/// even pinches).
pub fn criterion_7(_seed: u64) -> CriterionResult {
    let red = reducible_family(
        vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.2, 0.0)],
        vec![cx(6.0, 0.0), cx(7.5, 0.0), cx(9.0, 0.0)],
        1,
        geometric(1e-2, 0.5, 9),
        1e-10,
    )
    .unwrap();
    let eta_red = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    let w = [cx(0.13, 0.05), cx(-0.07, 0.11)];
    let f_red =
        check_theta_degeneration(&red, &eta_red, &w, ThetaRegime::ReducibleSecondOrder, 1e-13)
            .unwrap();
    let irr = irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, 12),
        1e-10,
    )
    .unwrap();
    let w2 = [cx(0.21, 0.03), cx(0.12, -0.04)];
    let f_odd = check_theta_degeneration(
        &irr,
        &Characteristic::new(vec![0, 0, 1, 0]).unwrap(),
        &w2,
        ThetaRegime::IrreducibleOddPinch,
        1e-13,
    )
    .unwrap();
    let f_even = check_theta_degeneration(
        &irr,
        &Characteristic::new(vec![1, 1, 0, 0]).unwrap(),
        &w2,
        ThetaRegime::IrreducibleEvenPinch,
        1e-13,
    )
    .unwrap();
    let pass = (f_red.slope - 2.0).abs() < 0.1
        && (f_odd.slope - 0.125).abs() < 0.01
        && (f_even.slope - 0.5).abs() < 0.05;
    CriterionResult {
        id: 7,
        name: "theta degeneration exponents".into(),
        passed: pass,
        details: format!(
            "residual slope {:.4} (target 2), pinch slopes {:.5} (target 1/8) and {:.4} (target 1/2)",
            f_red.slope, f_odd.slope, f_even.slope
        ),
    }
}

/// Criterion 8: spinor degeneration exponents.
pub fn criterion_8(_seed: u64) -> CriterionResult {
    let red = reducible_family(
        vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.2, 0.0)],
        vec![cx(6.0, 0.0), cx(7.5, 0.0), cx(9.0, 0.0)],
        1,
        geometric(1e-2, 0.5, 9),
        1e-10,
    )
    .unwrap();
    let eta_red = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    let f_outer = check_spinor_degeneration(
        &red,
        &eta_red,
        cx(8.2, 0.6),
        SpinorRegime::ReducibleOuterLinear,
        1e-13,
    )
    .unwrap();
    let f_inner = check_spinor_degeneration(
        &red,
        &eta_red,
        cx(0.45, 0.7),
        SpinorRegime::ReducibleInnerConstant,
        1e-13,
    )
    .unwrap();
    let irr = irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, 12),
        1e-10,
    )
    .unwrap();
    let odd_pinch = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| {
            c.top(1) == 1 && {
                let sq = spinor(&irr.points[0].pd, c, 1e-12).unwrap();
                match sq.zeros[0].point {
                    SurfacePoint::Branch { index } => index < 2 || index > 3,
                    _ => true,
                }
            }
        })
        .unwrap();
    let f_odd = check_spinor_degeneration(
        &irr,
        &odd_pinch,
        cx(0.4, 0.9),
        SpinorRegime::IrreducibleOddPinch,
        1e-13,
    )
    .unwrap();
    let even_pinch = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| c.top(1) == 0)
        .unwrap();
    let f_even = check_spinor_degeneration(
        &irr,
        &even_pinch,
        cx(0.4, 0.9),
        SpinorRegime::IrreducibleEvenPinchCorrection,
        1e-13,
    )
    .unwrap();
    let pass = (f_outer.slope - 1.0).abs() < 0.05
        && f_inner.slope.abs() < 0.05
        && (f_odd.slope - 0.125).abs() < 0.02
        && (f_even.slope - 1.0).abs() < 0.05;
    CriterionResult {
        id: 8,
        name: "spinor degeneration exponents".into(),
        passed: pass,
        details: format!(
            "outer {:.4} (target 1), inner {:.4} (target 0), pinch {:.5} (target 1/8), correction-in-r {:.4} (target 1)",
            f_outer.slope, f_inner.slope, f_odd.slope, f_even.slope
        ),
    }
}

/// Criterion 9: tau boundary exponents (the stretch runs).
pub fn criterion_9(_seed: u64) -> CriterionResult {
    let irr = irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, 8),
        1e-10,
    )
    .unwrap();
    let odd_pinch = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| {
            c.top(1) == 1 && {
                let sq = spinor(&irr.points[0].pd, c, 1e-12).unwrap();
                match sq.zeros[0].point {
                    SurfacePoint::Branch { index } => index < 2 || index > 3,
                    _ => true,
                }
            }
        })
        .unwrap();
    let a0 = fit_tau_boundary_exponent(&irr, &odd_pinch, TauBoundary::A0, 1e-12, 3e-8).unwrap();
    let ok_a0 = (a0.final_slope - 6.0).abs() / 6.0 < 0.05;
    let even_pinch = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| c.top(1) == 0)
        .unwrap();
    let b0 = fit_tau_boundary_exponent(&irr, &even_pinch, TauBoundary::B0, 1e-12, 3e-8).unwrap();
    let ok_b0 = (b0.final_slope - 16.0).abs() / 16.0 < 0.05;
    let red3 = reducible_family(
        vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.2, 0.0)],
        vec![cx(6.0, 0.0), cx(7.5, 0.0), cx(9.0, 0.0), cx(10.5, 0.0), cx(12.0, 0.0)],
        1,
        geometric(4e-3, 0.5, 8),
        1e-10,
    )
    .unwrap();
    let eta3 = Characteristic::new(vec![1, 1, 0, 0, 0, 0]).unwrap();
    let aj = fit_tau_boundary_exponent(&red3, &eta3, TauBoundary::AjBj, 1e-12, 3e-8).unwrap();
    let ok_aj = (aj.final_slope - 32.0).abs() / 32.0 < 0.05;
    // The merging-zeros approach: unattainable transversally inside the
    // hyperelliptic backend (odd spinors on smooth hyperelliptic curves never
    // have multiple zeros), so the collision family degenerates the curve
    // simultaneously and the intrinsic slope is contaminated. Measured and
    // reported; asserted against the stated target regardless.
    let zg = zg_family(
        vec![
            cx(0.0, 0.0),
            cx(1.0, 0.0),
            cx(2.0, 0.0),
            cx(3.0, 0.0),
            cx(8.0, 0.0),
            cx(9.0, 0.0),
        ],
        cx(5.5, 0.0),
        geometric(1e-2, 0.5, 8),
        1e-10,
    )
    .unwrap();
    let eta_zg = enumerate_characteristics(3, 1)
        .into_iter()
        .find(|c| {
            let sq = match spinor(&zg.points[0].pd, c, 1e-12) {
                Ok(s) => s,
                Err(_) => return false,
            };
            let idx: Vec<usize> = sq
                .zeros
                .iter()
                .filter_map(|z| match z.point {
                    SurfacePoint::Branch { index } => Some(index),
                    _ => None,
                })
                .collect();
            idx == vec![4, 5]
        })
        .unwrap();
    let zg_run = fit_tau_boundary_exponent(&zg, &eta_zg, TauBoundary::Zg, 1e-12, 3e-8).unwrap();
    let ok_zg = (zg_run.final_slope - 3.2).abs() / 3.2 < 0.05;
    CriterionResult {
        id: 9,
        name: "tau boundary exponents".into(),
        passed: ok_a0 && ok_b0 && ok_aj && ok_zg,
        details: format!(
            "A0 {:.4} (target 6), B0 {:.4} (target 16), A_j {:.4} (target 32), Zg-intrinsic {:.4} (target 16/5; unreachable transversally in the hyperelliptic backend - see notes)",
            a0.final_slope, b0.final_slope, aj.final_slope, zg_run.final_slope
        ),
    }
}

/// Criterion 10: exact divisor-class formulas.
pub fn criterion_10(_seed: u64) -> CriterionResult {
    let mut pass = true;
    for g in 3..=10 {
        let c = solve_farkas(g, &ExponentTable::standard(g)).unwrap();
        if !matches_closed_form(&c) {
            pass = false;
        }
        if c != farkas_closed_form(g) {
            pass = false;
        }
    }
    for g in 2..=10 {
        let c = solve_theta_null(g);
        if c.lambda != Rat::new(1, 4) || c.alpha[0] != Rat::new(-1, 16) {
            pass = false;
        }
        for j in 1..=g / 2 {
            if c.beta[j] != Rat::new(-1, 2) {
                pass = false;
            }
        }
    }
    CriterionResult {
        id: 10,
        name: "exact divisor classes".into(),
        passed: pass,
        details: "multiple-zero class for g=3..10 and theta-null class exact".into(),
    }
}

/// Run the acceptance suite at the given level.
pub fn run_all(level: Level, seed: u64) -> Vec<CriterionResult> {
    let mut out = vec![
        criterion_1(seed),
        criterion_2(seed),
        criterion_3(seed),
        criterion_4(seed),
        criterion_5(level, seed),
        criterion_6(seed),
        criterion_7(seed),
        criterion_8(seed),
    ];
    if level == Level::Full {
        out.push(criterion_9(seed));
    }
    out.push(criterion_10(seed));
    out
}

/// Spinor renormalization helper used by reports.
pub fn spinor_for_report(
    pd: &crate::surface::PeriodData,
    eta: &Characteristic,
    tol: f64,
) -> Result<crate::spinor::SpinorSquare, crate::spinor::SpinorError> {
    spinor_scaled(pd, eta, tol, cx(1.0, 0.0))
}
