//! Schwarzian derivative of a differential: S_omega = omega''/omega - (3/2)(omega'/omega)^2
//! in a declared chart, by exact rational differentiation for P(x) dx / y
//! forms and by high-order finite differences for sampled differentials.

use super::BergmanError;
use crate::util::{poly_deriv, poly_eval};
use num_complex::Complex64;

/// Exact Schwarzian of omega = P(x) dx / y in the x chart, where
/// y^2 = prod (x - e_i). With L = P'/P - (1/2) sum 1/(x - e_i),
/// S_omega = L' - L^2 / 2.
pub fn schwarzian_exact(
    numerator: &[Complex64],
    branch_points: &[Complex64],
    x: Complex64,
) -> Result<Complex64, BergmanError> {
    let p = poly_eval(numerator, x);
    let dp = poly_deriv(numerator);
    let ddp = poly_deriv(&dp);
    let p1 = poly_eval(&dp, x);
    let p2 = poly_eval(&ddp, x);
    let scale = numerator.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    if p.norm() < 1e-13 * scale * (1.0 + x.norm()) {
        return Err(BergmanError::ZeroOfOmegaAtPoint);
    }
    let mut s1 = Complex64::new(0.0, 0.0); // sum 1/(x - e)
    let mut s2 = Complex64::new(0.0, 0.0); // sum 1/(x - e)^2
    for &e in branch_points {
        let d = (x - e).inv();
        s1 += d;
        s2 += d * d;
    }
    let l = p1 / p - 0.5 * s1;
    // L' = P''/P - (P'/P)^2 + (1/2) sum 1/(x-e)^2
    let lp = p2 / p - (p1 / p) * (p1 / p) + 0.5 * s2;
    Ok(lp - 0.5 * l * l)
}

/// Finite-difference Schwarzian of a sampled differential coefficient
/// f(zeta) in its chart, with five-point stencils and Richardson over h, h/2.
pub fn schwarzian_fd(
    f: &dyn Fn(Complex64) -> Complex64,
    z0: Complex64,
    h: f64,
) -> Result<Complex64, BergmanError> {
    let sch = |h: f64| -> Result<Complex64, BergmanError> {
        let hh = Complex64::new(h, 0.0);
        let fm2 = f(z0 - hh * 2.0);
        let fm1 = f(z0 - hh);
        let f0 = f(z0);
        let fp1 = f(z0 + hh);
        let fp2 = f(z0 + hh * 2.0);
        if f0.norm() < 1e-250 {
            return Err(BergmanError::ZeroOfOmegaAtPoint);
        }
        let d1 = (fm2 - fp2 + (fp1 - fm1) * 8.0) / (12.0 * h);
        let d2 = (-fm2 - fp2 + (fp1 + fm1) * 16.0 - f0 * 30.0) / (12.0 * h * h);
        Ok(d2 / f0 - 1.5 * (d1 / f0) * (d1 / f0))
    };
    let c = sch(h)?;
    let fine = sch(0.5 * h)?;
    // both stencils are 4th order; Richardson for the h^4 term
    Ok((fine * 16.0 - c) / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_differential_has_zero_schwarzian() {
        let s = schwarzian_fd(&|_z| cx(2.3, -0.7), cx(0.4, 0.1), 1e-3).unwrap();
        assert!(s.norm() < 1e-10);
    }

    #[test]
    fn linear_differential_matches_formula() {
        // omega = z dz at z0: S = -(3/2)/z0^2
        let z0 = cx(0.7, -0.3);
        let s = schwarzian_fd(&|z| z, z0, 1e-3).unwrap();
        let expect = -1.5 / (z0 * z0);
        assert!((s - expect).norm() < 1e-9, "{s} vs {expect}");
    }

    #[test]
    fn exact_matches_fd_for_hyperelliptic_form() {
        // omega = (1 + 2x) dx / y on y^2 = x(x-1)(x-2)(x-3)
        let num = vec![cx(1.0, 0.0), cx(2.0, 0.0)];
        let branch = vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0), cx(3.0, 0.0)];
        let x0 = cx(0.4, 0.9);
        let exact = schwarzian_exact(&num, &branch, x0).unwrap();
        // sample the coefficient on a fixed analytic branch of y near x0
        let y0 = branch.iter().map(|&e| (x0 - e).sqrt()).product::<Complex64>();
        let f = |z: Complex64| {
            // continue y by small-ratio square roots from x0
            let mut y = y0;
            for &e in &branch {
                y *= ((z - e) / (x0 - e)).sqrt();
            }
            poly_eval(&num, z) / y
        };
        let fd = schwarzian_fd(&f, x0, 5e-4).unwrap();
        assert!(
            (exact - fd).norm() < 1e-8 * exact.norm().max(1.0),
            "exact {exact} vs fd {fd}"
        );
    }
}
