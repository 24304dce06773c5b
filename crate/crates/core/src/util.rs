//! Small numeric helpers shared across modules.

use num_complex::Complex64;

/// Kahan-Babuska compensated accumulator for complex sums.
///
/// Keeps the result independent of chunked evaluation order to roundoff,
/// which is what the reproducibility contract of the lattice sums needs.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: Complex64) {
        let t = self.sum + term;
        let c = if self.sum.norm_sqr() >= term.norm_sqr() {
            (self.sum - t) + term
        } else {
            (term - t) + self.sum
        };
        self.comp += c;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Linear least-squares fit of y against x; returns (slope, intercept, max_abs_residual).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0_f64, f64::max);
    (slope, intercept, resid)
}

/// Complex linear least-squares fit of y against real x: y = slope*x + intercept.
pub fn linear_fit_complex(xs: &[f64], ys: &[Complex64]) -> (Complex64, Complex64, f64) {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: Complex64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: Complex64 = xs.iter().zip(ys).map(|(x, y)| y * x).sum();
    let denom = n * sxx - sx * sx;
    let slope = (sxy * n - sy * sx) / denom;
    let intercept = (sy - slope * sx) / n;
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).norm())
        .fold(0.0_f64, f64::max);
    (slope, intercept, resid)
}

/// Evaluate a polynomial given by coefficients (low to high) at z.
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Derivative coefficients of a polynomial (low to high).
pub fn poly_deriv(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Monic polynomial with the given roots, as coefficients (low to high).
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Orientation sign of the ordered pair of plane directions (u, v).
#[inline]
pub fn cross_sign(u: Complex64, v: Complex64) -> f64 {
    (u.conj() * v).im
}

/// Intersection parameter of segments [a0,a1] and [b0,b1], if transversal and interior.
pub fn segment_intersection(
    a0: Complex64,
    a1: Complex64,
    b0: Complex64,
    b1: Complex64,
) -> Option<(f64, f64)> {
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let denom = cross_sign(d1, d2);
    if denom.abs() < 1e-14 * (d1.norm() * d2.norm()).max(1e-300) {
        return None;
    }
    let w = b0 - a0;
    let s = cross_sign(w, d2) / denom;
    let t = cross_sign(w, d1) / denom;
    if s > 1e-12 && s < 1.0 - 1e-12 && t > 1e-12 && t < 1.0 - 1e-12 {
        Some((s, t))
    } else {
        None
    }
}
