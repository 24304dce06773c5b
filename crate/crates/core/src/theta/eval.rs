//! Lattice-sum evaluation of theta functions with certified truncation.

use super::{Characteristic, PeriodMatrix, ThetaError, ThetaResult};
use crate::util::CompensatedSum;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// One lattice point of the truncated sum, with the argument-independent part of
/// the exponent precomputed.
struct LatticePoint {
    /// v = n + shift_top
    v: Vec<f64>,
    /// pi*i * v^T Omega v + 2*pi*i * v^T shift_bottom
    base_exponent: Complex64,
}

/// Reusable theta evaluator for a fixed period matrix and characteristic.
///
/// Arguments are reduced modulo the period lattice before summation, so the
/// certified bound holds for every w.
pub struct ThetaEvaluator {
    g: usize,
    omega: DMatrix<Complex64>,
    y_inv: DMatrix<f64>,
    shift_top: Vec<f64>,
    shift_bottom: Vec<f64>,
    points: Vec<LatticePoint>,
    /// Tail bounds for derivative orders 0, 1, 2.
    tails: [f64; 3],
    max_order: u8,
    radius: f64,
}

fn spectral_bound(y: &DMatrix<f64>) -> f64 {
    // max row sum bounds the spectral norm of a symmetric matrix
    (0..y.nrows())
        .map(|i| (0..y.ncols()).map(|j| y[(i, j)].abs()).sum::<f64>())
        .fold(0.0_f64, f64::max)
}

/// Gaussian tail machinery: shell bound for terms with sqrt(q) in [k, k+1),
/// where q is the ellipsoid form (n+a)^T Y (n+a).
fn tail_bound(g: usize, lambda_min: f64, im_w_bound: f64, order: u8, k_min: usize) -> f64 {
    let sl = lambda_min.sqrt();
    let d = order as f64;
    let term = |s: f64| -> f64 {
        let poly = if order == 0 {
            1.0
        } else {
            (TAU * s / sl).powf(d)
        };
        let count = (2.0 * (s + 1.0) / sl + 3.0).powi(g as i32);
        count * poly * (-PI * s * s + TAU * im_w_bound * s / sl).exp()
    };
    let mut total = 0.0;
    let mut k = k_min;
    loop {
        let t = term(k as f64);
        total += t;
        k += 1;
        if (t < total * 1e-18 && k > k_min + 3) || !t.is_finite() || k > k_min + 10_000 {
            break;
        }
    }
    total
}

/// Smallest shell index K beyond which the shell bound is decreasing and the
/// tail is at most `tol`.
fn shell_cut(g: usize, lambda_min: f64, im_w_bound: f64, order: u8, tol: f64) -> usize {
    let sl = lambda_min.sqrt();
    let d = order as f64;
    let vs = im_w_bound / sl;
    // stationary point of the log of the shell integrand
    let s0 = 0.5 * (vs + (vs * vs + 2.0 * d / PI).sqrt());
    let mut k = (s0.ceil() as usize).max(1) + 1;
    loop {
        if tail_bound(g, lambda_min, im_w_bound, order, k) <= tol {
            return k;
        }
        k += 1;
        assert!(k < 10_000, "truncation radius search diverged");
    }
}

/// Enumerate all integer vectors n with (n+a)^T Y (n+a) <= q_cut via the
/// Cholesky recursion.
fn enumerate_ellipsoid(y: &DMatrix<f64>, a: &[f64], q_cut: f64) -> Vec<Vec<f64>> {
    let g = y.nrows();
    let chol = y.clone().cholesky().expect("positive definite");
    let u = chol.l().transpose(); // upper triangular, Y = U^T U
    let mut out = Vec::new();
    let mut v = vec![0.0_f64; g];
    // recursion from the last coordinate down
    fn recurse(
        u: &DMatrix<f64>,
        a: &[f64],
        level: isize,
        budget: f64,
        v: &mut Vec<f64>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if level < 0 {
            out.push(v.clone());
            return;
        }
        let i = level as usize;
        let uii = u[(i, i)];
        // center of the allowed interval for v_i given the fixed tail coordinates
        let mut c = 0.0;
        for j in (i + 1)..v.len() {
            c += u[(i, j)] * v[j];
        }
        c /= uii;
        let r = budget.max(0.0).sqrt() / uii;
        let lo = (-c - r - a[i]).ceil() as i64;
        let hi = (-c + r - a[i]).floor() as i64;
        for n in lo..=hi {
            let vi = n as f64 + a[i];
            let contrib = uii * (vi + c);
            let rem = budget - contrib * contrib;
            if rem >= -1e-12 {
                v[i] = vi;
                recurse(u, a, level - 1, rem, v, out);
            }
        }
    }
    recurse(&u, a, g as isize - 1, q_cut, &mut v, &mut out);
    out.sort_by(|p, q| p.partial_cmp(q).unwrap());
    out
}

impl ThetaEvaluator {
    pub fn new(
        eta: &Characteristic,
        omega: &PeriodMatrix,
        tol: f64,
        max_order: u8,
    ) -> Result<Self, ThetaError> {
        if tol <= 0.0 {
            return Err(ThetaError::NonPositiveTolerance(tol));
        }
        let g = omega.genus();
        if eta.genus() != g {
            return Err(ThetaError::DimensionMismatch {
                expected: g,
                got: eta.genus(),
            });
        }
        let y = omega.imaginary_part();
        let lambda_min = omega.min_im_eigenvalue();
        let y_inv = y
            .clone()
            .try_inverse()
            .ok_or(ThetaError::DegenerateImaginaryPart(lambda_min))?;
        // arguments are always reduced first, so Im w is bounded by the cell size
        let im_w_bound = 0.51 * spectral_bound(&y) * (g as f64).sqrt() + 0.01;
        let k_cut = shell_cut(g, lambda_min, im_w_bound, max_order, tol * 0.5);
        let q_cut = (k_cut as f64) * (k_cut as f64);
        let tails = [
            tail_bound(g, lambda_min, im_w_bound, 0, k_cut),
            tail_bound(g, lambda_min, im_w_bound, 1, k_cut),
            tail_bound(g, lambda_min, im_w_bound, 2, k_cut),
        ];
        let a = eta.shift_top();
        let b = eta.shift_bottom();
        let vs = enumerate_ellipsoid(&y, &a, q_cut);
        let om = omega.matrix();
        let points = vs
            .into_iter()
            .map(|v| {
                let mut quad = Complex64::new(0.0, 0.0);
                for i in 0..g {
                    for j in 0..g {
                        quad += om[(i, j)] * v[i] * v[j];
                    }
                }
                let lin: f64 = v.iter().zip(&b).map(|(vi, bi)| vi * bi).sum();
                LatticePoint {
                    base_exponent: Complex64::new(0.0, PI) * quad
                        + Complex64::new(0.0, TAU * lin),
                    v,
                }
            })
            .collect();
        Ok(Self {
            g,
            omega: om.clone(),
            y_inv,
            shift_top: a,
            shift_bottom: b,
            points,
            tails,
            max_order,
            radius: k_cut as f64 / lambda_min.sqrt(),
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// Euclidean radius certificate of the truncation ellipsoid.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn lattice_size(&self) -> usize {
        self.points.len()
    }

    /// Reduce w modulo the period lattice: returns (w0, m, n) with
    /// w = w0 + Omega*m + n and Im w0 inside the fundamental cell.
    fn reduce(&self, w: &[Complex64]) -> (Vec<Complex64>, Vec<f64>, Vec<f64>) {
        let g = self.g;
        let im = DVector::from_iterator(g, w.iter().map(|z| z.im));
        let coeff = &self.y_inv * im;
        let m: Vec<f64> = coeff.iter().map(|c| c.round()).collect();
        let mut w1 = w.to_vec();
        for i in 0..g {
            for j in 0..g {
                w1[i] -= self.omega[(i, j)] * m[j];
            }
        }
        let n: Vec<f64> = w1.iter().map(|z| z.re.round()).collect();
        for i in 0..g {
            w1[i] -= n[i];
        }
        (w1, m, n)
    }

    /// Evaluate theta and derivatives up to `order` at w.
    ///
    /// Returns (value, gradient, hessian); the gradient is empty for order 0 and
    /// the hessian empty below order 2.
    pub fn eval(
        &self,
        w: &[Complex64],
        order: u8,
    ) -> Result<(ThetaResult, Vec<ThetaResult>, DMatrix<Complex64>), ThetaError> {
        if w.len() != self.g {
            return Err(ThetaError::DimensionMismatch {
                expected: self.g,
                got: w.len(),
            });
        }
        assert!(order <= self.max_order, "evaluator built for lower order");
        let g = self.g;
        let (w0, m, n) = self.reduce(w);

        let mut s_val = CompensatedSum::new();
        let mut s_grad = vec![CompensatedSum::new(); if order >= 1 { g } else { 0 }];
        let mut s_hess = vec![CompensatedSum::new(); if order >= 2 { g * g } else { 0 }];
        for p in &self.points {
            let lin: Complex64 = p
                .v
                .iter()
                .zip(&w0)
                .map(|(vi, wi)| wi * *vi)
                .sum::<Complex64>();
            let term = (p.base_exponent + Complex64::new(0.0, TAU) * lin).exp();
            s_val.add(term);
            if order >= 1 {
                for j in 0..g {
                    let tv = Complex64::new(0.0, TAU * p.v[j]);
                    s_grad[j].add(term * tv);
                    if order >= 2 {
                        for k in j..g {
                            let tv2 = tv * Complex64::new(0.0, TAU * p.v[k]);
                            s_hess[j * g + k].add(term * tv2);
                        }
                    }
                }
            }
        }

        // automorphy factor undoing the reduction:
        // theta(w) = E * theta(w0) with w = w0 + Omega*m + n
        let mut m_om_m = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                m_om_m += self.omega[(i, j)] * m[i] * m[j];
            }
        }
        let m_dot: Complex64 = (0..g)
            .map(|i| (w0[i] + self.shift_bottom[i]) * m[i])
            .sum();
        let a_dot_n: f64 = (0..g).map(|i| self.shift_top[i] * n[i]).sum();
        let e_fac = (Complex64::new(0.0, -PI) * m_om_m - Complex64::new(0.0, TAU) * m_dot
            + Complex64::new(0.0, TAU * a_dot_n))
        .exp();
        let e_abs = e_fac.norm();
        let m_norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();

        let val0 = s_val.value();
        let value = ThetaResult {
            value: e_fac * val0,
            error_bound: e_abs * self.tails[0],
            order: 0,
        };
        let mut grad = Vec::new();
        let mut hess = DMatrix::from_element(0, 0, Complex64::new(0.0, 0.0));
        if order >= 1 {
            let g0: Vec<Complex64> = s_grad.iter().map(|s| s.value()).collect();
            let bound1 = e_abs * (self.tails[1] + TAU * m_norm * self.tails[0]);
            grad = (0..g)
                .map(|j| ThetaResult {
                    value: e_fac * (g0[j] - Complex64::new(0.0, TAU * m[j]) * val0),
                    error_bound: bound1,
                    order: 1,
                })
                .collect();
            if order >= 2 {
                hess = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
                for j in 0..g {
                    for k in j..g {
                        let h0 = s_hess[j * g + k].value();
                        let tmj = Complex64::new(0.0, -TAU * m[j]);
                        let tmk = Complex64::new(0.0, -TAU * m[k]);
                        let v = e_fac * (h0 + tmj * g0[k] + tmk * g0[j] + tmj * tmk * val0);
                        hess[(j, k)] = v;
                        hess[(k, j)] = v;
                    }
                }
            }
        }
        Ok((value, grad, hess))
    }
}

/// Certified truncation radius (Euclidean norm of n + shift) for the given
/// tolerance and derivative order.
pub fn truncation_radius(
    omega: &PeriodMatrix,
    tol: f64,
    deriv_order: u8,
) -> Result<f64, ThetaError> {
    if tol <= 0.0 {
        return Err(ThetaError::NonPositiveTolerance(tol));
    }
    let y = omega.imaginary_part();
    let lambda_min = omega.min_im_eigenvalue();
    if lambda_min <= 0.0 {
        return Err(ThetaError::DegenerateImaginaryPart(lambda_min));
    }
    let g = omega.genus();
    let im_w_bound = 0.51 * spectral_bound(&y) * (g as f64).sqrt() + 0.01;
    let k = shell_cut(g, lambda_min, im_w_bound, deriv_order, tol * 0.5);
    Ok(k as f64 / lambda_min.sqrt())
}

/// Theta function with characteristic at w.
pub fn theta(
    eta: &Characteristic,
    omega: &PeriodMatrix,
    w: &[Complex64],
    tol: f64,
) -> Result<ThetaResult, ThetaError> {
    let ev = ThetaEvaluator::new(eta, omega, tol, 0)?;
    Ok(ev.eval(w, 0)?.0)
}

/// Gradient of theta in w.
pub fn theta_gradient(
    eta: &Characteristic,
    omega: &PeriodMatrix,
    w: &[Complex64],
    tol: f64,
) -> Result<Vec<ThetaResult>, ThetaError> {
    let ev = ThetaEvaluator::new(eta, omega, tol, 1)?;
    Ok(ev.eval(w, 1)?.1)
}

/// Hessian of theta in w; symmetric by construction.
pub fn theta_hessian(
    eta: &Characteristic,
    omega: &PeriodMatrix,
    w: &[Complex64],
    tol: f64,
) -> Result<DMatrix<Complex64>, ThetaError> {
    let ev = ThetaEvaluator::new(eta, omega, tol, 2)?;
    Ok(ev.eval(w, 2)?.2)
}
