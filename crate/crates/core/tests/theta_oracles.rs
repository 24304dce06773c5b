//! Theta function checks against independent brute-force summation and the
//! classical transformation laws.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use spinlab_core::theta::{
    all_characteristics, random_symplectic, symplectic_transform, theta, theta_gradient,
    theta_hessian, truncation_radius, Characteristic, PeriodMatrix,
};
use std::f64::consts::PI;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Brute-force lattice sum over a box of the given radius; independent of the
/// evaluator's ellipsoid, reduction and compensation machinery.
fn brute_theta(
    eta: &Characteristic,
    omega: &DMatrix<Complex64>,
    w: &[Complex64],
    radius: i64,
) -> Complex64 {
    let g = omega.nrows();
    let a = eta.shift_top();
    let b = eta.shift_bottom();
    let mut idx = vec![-radius; g];
    let mut total = cx(0.0, 0.0);
    loop {
        let v: Vec<f64> = (0..g).map(|i| idx[i] as f64 + a[i]).collect();
        let mut quad = cx(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += omega[(i, j)] * v[i] * v[j];
            }
        }
        let mut lin = cx(0.0, 0.0);
        for i in 0..g {
            lin += (w[i] + b[i]) * v[i];
        }
        total += (cx(0.0, PI) * quad + cx(0.0, 2.0 * PI) * lin).exp();
        // odometer
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] <= radius {
                break;
            }
            idx[k] = -radius;
            k += 1;
            if k == g {
                return total;
            }
        }
    }
}

fn random_period_matrix(g: usize, rng: &mut impl Rng) -> PeriodMatrix {
    // symmetric real part + (L L^T + I) imaginary part
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
    let om = DMatrix::from_fn(g, g, |i, j| cx(re[(i, j)], im[(i, j)]));
    PeriodMatrix::new(om, 1e-12).unwrap()
}

#[test]
fn matches_brute_force_at_g1_and_g2() {
    let om1 = PeriodMatrix::new(DMatrix::from_row_slice(1, 1, &[cx(0.0, 1.0)]), 1e-12).unwrap();
    let eta = Characteristic::zero(1);
    let v = theta(&eta, &om1, &[cx(0.0, 0.0)], 1e-12).unwrap();
    let oracle = brute_theta(&eta, om1.matrix(), &[cx(0.0, 0.0)], 30);
    assert!((v.value - oracle).norm() < 1e-12);

    let mut rng = rand::rngs::StdRng::seed_from_u64(42);
    let om2 = random_period_matrix(2, &mut rng);
    let w = [cx(0.21, 0.13), cx(-0.05, 0.07)];
    for eta in all_characteristics(2).iter().take(6) {
        let v = theta(eta, &om2, &w, 1e-12).unwrap();
        let oracle = brute_theta(eta, om2.matrix(), &w, 12);
        assert!(
            (v.value - oracle).norm() < 1e-10,
            "characteristic {:?}: {} vs {}",
            eta.bits(),
            v.value,
            oracle
        );
    }
}

#[test]
fn odd_characteristics_vanish_at_origin() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for g in 1..=3 {
        let om = random_period_matrix(g, &mut rng);
        let zero = vec![cx(0.0, 0.0); g];
        for eta in all_characteristics(g).iter().filter(|c| c.is_odd()) {
            let v = theta(eta, &om, &zero, 1e-12).unwrap();
            assert!(v.value.norm() <= 1e-12, "odd theta nonzero: {:?}", eta.bits());
        }
    }
}

#[test]
fn even_gradient_and_odd_hessian_vanish_at_origin() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let om = random_period_matrix(2, &mut rng);
    let zero = vec![cx(0.0, 0.0); 2];
    let even = Characteristic::new(vec![0, 1, 1, 0]).unwrap();
    for r in theta_gradient(&even, &om, &zero, 1e-12).unwrap() {
        assert!(r.value.norm() <= 1e-12);
    }
    let odd = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    let h = theta_hessian(&odd, &om, &zero, 1e-12).unwrap();
    for v in h.iter() {
        assert!(v.norm() <= 1e-12);
    }
}

#[test]
fn quasiperiodicity_identity() {
    // both sides by direct summation too, per the derived example
    let om = PeriodMatrix::new(DMatrix::from_row_slice(1, 1, &[cx(0.0, 1.0)]), 1e-12).unwrap();
    let eta = Characteristic::new(vec![1, 0]).unwrap();
    let w = [cx(0.3, 0.2)];
    let tol = 1e-12;
    let (m, n) = (1.0_f64, 1.0_f64);
    let shifted = [w[0] + om.matrix()[(0, 0)] * m + n];
    let lhs = theta(&eta, &om, &shifted, tol).unwrap().value;
    let a = eta.shift_top()[0];
    let b = eta.shift_bottom()[0];
    let phase = (cx(0.0, -PI) * om.matrix()[(0, 0)] * m * m
        - cx(0.0, 2.0 * PI) * m * (w[0] + b)
        + cx(0.0, 2.0 * PI * a * n))
    .exp();
    let rhs = phase * theta(&eta, &om, &w, tol).unwrap().value;
    assert!((lhs - rhs).norm() < 10.0 * tol * rhs.norm().max(1.0));

    // direct-summation cross-check of both sides
    let lhs_brute = brute_theta(&eta, om.matrix(), &shifted, 40);
    let rhs_brute = phase * brute_theta(&eta, om.matrix(), &w, 40);
    assert!((lhs_brute - rhs_brute).norm() < 1e-10);
    assert!((lhs - lhs_brute).norm() < 1e-10);
}

#[test]
fn quasiperiodicity_all_small_shifts_up_to_g3() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(19);
    for g in 1..=3 {
        let om = random_period_matrix(g, &mut rng);
        let tol = 1e-12;
        let w: Vec<Complex64> = (0..g).map(|i| cx(0.1 + 0.03 * i as f64, 0.05)).collect();
        let eta = all_characteristics(g)[3].clone();
        let a = eta.shift_top();
        let b = eta.shift_bottom();
        let base = theta(&eta, &om, &w, tol).unwrap().value;
        for trial in 0..4 {
            let m: Vec<f64> = (0..g).map(|i| (((trial + i) % 5) as f64) - 2.0).collect();
            let n: Vec<f64> = (0..g).map(|i| (((trial + 2 * i) % 5) as f64) - 2.0).collect();
            if m.iter().any(|x| x.abs() > 2.0) || n.iter().any(|x| x.abs() > 2.0) {
                continue;
            }
            let mut shifted = w.clone();
            for i in 0..g {
                for j in 0..g {
                    shifted[i] += om.matrix()[(i, j)] * m[j];
                }
                shifted[i] += n[i];
            }
            let lhs = theta(&eta, &om, &shifted, tol).unwrap().value;
            let mut m_om_m = cx(0.0, 0.0);
            let mut m_dot = cx(0.0, 0.0);
            let mut a_n = 0.0;
            for i in 0..g {
                for j in 0..g {
                    m_om_m += om.matrix()[(i, j)] * m[i] * m[j];
                }
                m_dot += (w[i] + b[i]) * m[i];
                a_n += a[i] * n[i];
            }
            let phase =
                (cx(0.0, -PI) * m_om_m - cx(0.0, 2.0 * PI) * m_dot + cx(0.0, 2.0 * PI * a_n)).exp();
            let rhs = phase * base;
            assert!(
                (lhs - rhs).norm() <= 10.0 * tol * rhs.norm().max(1.0) + 1e-11,
                "g={g} shift failed: {} vs {}",
                lhs,
                rhs
            );
        }
    }
}

#[test]
fn theta_eighth_power_modularity() {
    // theta(0, Omega')^8 = det(s12 Omega + s11)^4 theta(0, Omega)^8 for even
    // characteristics; the eighth power kills the root-of-unity ambiguity.
    let mut rng = rand::rngs::StdRng::seed_from_u64(23);
    for g in 2..=3 {
        let om = random_period_matrix(g, &mut rng);
        let zero = vec![cx(0.0, 0.0); g];
        let evens: Vec<Characteristic> = all_characteristics(g)
            .into_iter()
            .filter(|c| !c.is_odd())
            .collect();
        for trial in 0..6 {
            let sigma = random_symplectic(g, 3, &mut rng);
            let eta = &evens[trial % evens.len()];
            let (om2, eta2, aut) = symplectic_transform(&sigma, &om, eta).unwrap();
            let t1 = theta(eta, &om, &zero, 1e-13).unwrap().value;
            let t2 = theta(&eta2, &om2, &zero, 1e-13).unwrap().value;
            let lhs = t2.powu(8);
            let rhs = aut.powu(4) * t1.powu(8);
            let rel = (lhs - rhs).norm() / rhs.norm();
            assert!(
                rel < 1e-8,
                "g={g} trial={trial}: rel defect {rel:e} (lhs {lhs}, rhs {rhs})"
            );
        }
    }
}

#[test]
fn heat_equation_finite_difference() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(31);
    let om = random_period_matrix(2, &mut rng);
    let eta = Characteristic::new(vec![0, 1, 1, 0]).unwrap();
    let w = [cx(0.11, 0.04), cx(-0.03, 0.09)];
    let h = theta_hessian(&eta, &om, &w, 1e-13).unwrap();
    let step = 1e-5;
    for (j, k) in [(0usize, 0usize), (0, 1), (1, 1)] {
        let mut bump = DMatrix::from_element(2, 2, cx(0.0, 0.0));
        bump[(j, k)] = cx(step, 0.0);
        bump[(k, j)] = cx(step, 0.0);
        let omp = PeriodMatrix::new(om.matrix() + &bump, 1e-9).unwrap();
        let omm = PeriodMatrix::new(om.matrix() - &bump, 1e-9).unwrap();
        let tp = theta(&eta, &omp, &w, 1e-13).unwrap().value;
        let tm = theta(&eta, &omm, &w, 1e-13).unwrap().value;
        let fd = (tp - tm) / (2.0 * step);
        let factor = cx(0.0, 4.0 * PI).inv() * (2.0 - if j == k { 1.0 } else { 0.0 });
        let rhs = factor * h[(j, k)];
        assert!(
            (fd - rhs).norm() < 1e-5 * rhs.norm().max(1.0),
            "heat equation ({j},{k}): {fd} vs {rhs}"
        );
    }
}

#[test]
fn truncation_radius_certifies_tail() {
    // lattice sum over the returned radius reproduces the reference to tol,
    // with a 3x radius brute-force sum as the oracle
    let om = PeriodMatrix::new(DMatrix::from_row_slice(1, 1, &[cx(0.0, 1.0)]), 1e-12).unwrap();
    let tol = 1e-12;
    let r = truncation_radius(&om, tol, 0).unwrap();
    let eta = Characteristic::zero(1);
    let within: f64 = {
        let mut s = 0.0;
        let mut n = -(3.0 * r) as i64;
        while (n as f64) <= 3.0 * r {
            if (n as f64).abs() <= r {
                s += (-PI * (n as f64) * (n as f64)).exp();
            }
            n += 1;
        }
        s
    };
    let oracle = brute_theta(&eta, om.matrix(), &[cx(0.0, 0.0)], (3.0 * r) as i64);
    assert!((within - oracle.re).abs() <= tol);
}
