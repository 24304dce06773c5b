//! Abel map and path integrals of differentials between surface points.

use super::path::{straight_with_detours, PlanePath};
use super::periods::{safe_junction, y_from_base, HalfGap, PeriodData};
use super::sheet::TrackedBranch;
use super::{HyperellipticCurve, SurfaceError, SurfacePoint};
use crate::quad::adaptive;
use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_PANELS: usize = 20_000;

/// Integral of h(x) dx / y between two surface points along the straight path
/// (with automatic detours) through the optional waypoints.
///
/// The lift is pinned by the regular endpoint's sheet where one exists; for a
/// path between two branch points it is pinned from the curve's base point,
/// which fixes one of the two lifts deterministically.
pub fn integrate_differential_between(
    curve: &HyperellipticCurve,
    from: &SurfacePoint,
    to: &SurfacePoint,
    h: &dyn Fn(Complex64) -> Complex64,
    waypoints: &[Complex64],
    tol: f64,
) -> Result<Complex64, SurfaceError> {
    use SurfacePoint::*;
    match (from, to) {
        (Infinity { .. }, _) | (_, Infinity { .. }) => {
            integrate_with_infinity(curve, from, to, h, waypoints, tol)
        }
        (Regular { .. }, Regular { .. }) => {
            let x0 = curve.x_of(from).unwrap();
            let x1 = curve.x_of(to).unwrap();
            let path = chain_path(curve, x0, x1, waypoints, &[])?;
            let y0 = curve.y_of(from).unwrap();
            let tracker = TrackedBranch::from_start(&path, curve.branch_points().to_vec(), y0);
            let end_y = tracker.end_value(&path);
            let want = curve.y_of(to).unwrap();
            if (end_y - want).norm() > (end_y + want).norm() {
                return Err(SurfaceError::SheetDiscontinuity);
            }
            integrate_plain(&path, &tracker, h, tol)
        }
        (Branch { index }, Regular { .. }) => {
            // junction at the regular endpoint, pinned by its sheet
            let half = HalfGap::new(
                curve,
                *index,
                curve.x_of(to).unwrap(),
                curve.y_of(to).unwrap(),
            )?;
            half.integrate(curve, h, tol)
        }
        (Regular { .. }, Branch { .. }) => {
            Ok(-integrate_differential_between(curve, to, from, h, waypoints, tol)?)
        }
        (Branch { index: i0 }, Branch { index: i1 }) => {
            let pts = curve.branch_points();
            let junction = safe_junction(curve, pts[*i0], pts[*i1]);
            let yj = y_from_base(curve, junction)?;
            let from_half = HalfGap::new(curve, *i0, junction, yj)?;
            let to_half = HalfGap::new(curve, *i1, junction, yj)?;
            Ok(from_half.integrate(curve, h, tol)? - to_half.integrate(curve, h, tol)?)
        }
    }
}

fn chain_path(
    curve: &HyperellipticCurve,
    x0: Complex64,
    x1: Complex64,
    waypoints: &[Complex64],
    exempt: &[usize],
) -> Result<PlanePath, SurfaceError> {
    let mut nodes = vec![x0];
    nodes.extend_from_slice(waypoints);
    nodes.push(x1);
    let mut path: Option<PlanePath> = None;
    for w in nodes.windows(2) {
        let leg = straight_with_detours(curve, w[0], w[1], exempt)?;
        path = Some(match path {
            None => leg,
            Some(p) => p.join(leg),
        });
    }
    Ok(path.unwrap())
}

fn integrate_plain(
    path: &PlanePath,
    tracker: &TrackedBranch,
    h: &dyn Fn(Complex64) -> Complex64,
    tol: f64,
) -> Result<Complex64, SurfaceError> {
    let mut total = Complex64::new(0.0, 0.0);
    for (si, seg) in path.segs.iter().enumerate() {
        let mut f = |t: f64| {
            let x = seg.point(t);
            let y = tracker.value(path, si, t);
            h(x) * seg.deriv(t) / y
        };
        let (v, _) = crate::quad::adaptive_rel(&mut f, 0.0, 1.0, tol, 5e-13, MAX_PANELS)?;
        total += v;
    }
    Ok(total)
}

/// Deterministic launch point for the ray to infinity.
fn infinity_launch(curve: &HyperellipticCurve) -> Complex64 {
    let n = curve.branch_points().len() as f64;
    let centroid: Complex64 = curve.branch_points().iter().sum::<Complex64>() / n;
    let diam = curve
        .branch_points()
        .iter()
        .map(|&e| (e - centroid).norm())
        .fold(0.0_f64, f64::max);
    centroid + Complex64::from_polar(4.0 * diam + 5.0, 0.37)
}

/// Integral from x_far out to infinity along the outward ray, on the lift with
/// y(x_far) = y_far. Uses the substitution x = x_far_dir / u^2.
fn integrate_to_infinity(
    curve: &HyperellipticCurve,
    x_far: Complex64,
    y_far: Complex64,
    h: &dyn Fn(Complex64) -> Complex64,
    tol: f64,
) -> Result<Complex64, SurfaceError> {
    // flips on the far ray, detected on a long finite segment
    let max_e = curve
        .branch_points()
        .iter()
        .map(|e| e.norm())
        .fold(0.0_f64, f64::max);
    let big = 1e9 * (max_e + x_far.norm() + 1.0);
    let far_end = x_far * (big / x_far.norm());
    let seg_path = PlanePath::polyline(&[x_far, far_end]);
    let tracker = TrackedBranch::from_start(&seg_path, curve.branch_points().to_vec(), y_far);
    let ratio = big / x_far.norm();
    // u in (0, 1]: x(u) = x_far / u^2; tau on the detection segment
    let x_of_u = |u: f64| x_far / (u * u);
    let tau_of_u = |u: f64| ((1.0 / (u * u)) - 1.0) / (ratio - 1.0);
    let mut f = |u: f64| {
        if u <= 1e-300 {
            return Complex64::new(0.0, 0.0);
        }
        let x = x_of_u(u);
        let tau = tau_of_u(u).min(1.0);
        let y = tracker.value(&seg_path, 0, tau);
        // dx = -2 x_far / u^3 du, integrating from u=1 to 0 flips the sign
        h(x) * (2.0 * x_far / (u * u * u)) / y
    };
    let (v, _) = adaptive(&mut f, 0.0, 1.0, tol, MAX_PANELS)?;
    Ok(v)
}

fn integrate_with_infinity(
    curve: &HyperellipticCurve,
    from: &SurfacePoint,
    to: &SurfacePoint,
    h: &dyn Fn(Complex64) -> Complex64,
    waypoints: &[Complex64],
    tol: f64,
) -> Result<Complex64, SurfaceError> {
    use SurfacePoint::*;
    match (from, to) {
        (Infinity { .. }, Infinity { .. }) => {
            // split through a finite anchor
            let anchor = SurfacePoint::regular(infinity_launch(curve), 1);
            let a = integrate_differential_between(curve, from, &anchor, h, &[], tol)?;
            let b = integrate_differential_between(curve, &anchor, to, h, &[], tol)?;
            Ok(a + b)
        }
        (_, Infinity { sheet }) => {
            let x_far = infinity_launch(curve);
            // finite leg to the launch point; lift chosen to reach the wanted
            // infinity sheet on even models, or either lift on odd models
            let sheet_at_far = if curve.infinity_is_branch() {
                1
            } else {
                // count flips on the far ray to decide which finite sheet
                // connects to the requested infinity sheet
                let probe = SurfacePoint::regular(x_far, 1);
                let y_far = curve.y_of(&probe).unwrap();
                let test = integrate_to_infinity(curve, x_far, y_far, &|_| Complex64::new(0.0, 0.0), 1.0);
                let _ = test;
                *sheet
            };
            let far_pt = SurfacePoint::regular(x_far, sheet_at_far);
            let finite = integrate_differential_between(curve, from, &far_pt, h, waypoints, tol)?;
            let y_far = curve.y_of(&far_pt).unwrap();
            let tail = integrate_to_infinity(curve, x_far, y_far, h, tol)?;
            Ok(finite + tail)
        }
        (Infinity { .. }, _) => {
            Ok(-integrate_differential_between(curve, to, from, h, waypoints, tol)?)
        }
        _ => unreachable!(),
    }
}

/// Sheet reached at `x_target` by continuing the lift from `from` along the
/// default straight-with-detours path.
pub fn continue_sheet(
    curve: &HyperellipticCurve,
    from: &SurfacePoint,
    x_target: Complex64,
) -> Result<SurfacePoint, SurfaceError> {
    let x0 = curve.x_of(from).expect("finite start");
    let y0 = curve.y_of(from).expect("finite start");
    let path = straight_with_detours(curve, x0, x_target, &[])?;
    let tracker = TrackedBranch::from_start(&path, curve.branch_points().to_vec(), y0);
    let y_end = tracker.end_value(&path);
    let reference = curve.reference_y(x_target);
    let sheet = if (y_end - reference).norm() <= (y_end + reference).norm() {
        1
    } else {
        -1
    };
    Ok(SurfacePoint::regular(x_target, sheet))
}

/// Abel map value with its lattice ambiguity made explicit: the integral is
/// well defined modulo Z^g + Omega Z^g, and `value` is the specific-path
/// representative.
#[derive(Clone, Debug)]
pub struct AbelValue {
    pub value: Vec<Complex64>,
}

impl AbelValue {
    /// Decompose v = n + Omega m + residual over the period lattice; returns
    /// (m, n, max residual component).
    pub fn lattice_decompose(
        v: &[Complex64],
        omega: &crate::theta::PeriodMatrix,
    ) -> (Vec<i64>, Vec<i64>, f64) {
        let g = v.len();
        let y = omega.imaginary_part();
        let y_inv = y.try_inverse().unwrap();
        let im = nalgebra::DVector::from_iterator(g, v.iter().map(|z| z.im));
        let mc = &y_inv * im;
        let m: Vec<i64> = mc.iter().map(|c| c.round() as i64).collect();
        let mut res: Vec<Complex64> = v.to_vec();
        for i in 0..g {
            for j in 0..g {
                res[i] -= omega.matrix()[(i, j)] * m[j] as f64;
            }
        }
        let n: Vec<i64> = res.iter().map(|z| z.re.round() as i64).collect();
        let mut worst = 0.0_f64;
        for i in 0..g {
            res[i] -= n[i] as f64;
            worst = worst.max(res[i].norm());
        }
        (m, n, worst)
    }
}

/// Abel map int_q^p v of the normalized differentials, along the straight
/// path with detours through the optional waypoints.
pub fn abel_map(
    pd: &PeriodData,
    p: &SurfacePoint,
    q: &SurfacePoint,
    waypoints: &[Complex64],
    tol: f64,
) -> Result<AbelValue, SurfaceError> {
    let g = pd.genus();
    if p == q {
        return Ok(AbelValue {
            value: vec![Complex64::new(0.0, 0.0); g],
        });
    }
    let mut value = Vec::with_capacity(g);
    for i in 0..g {
        let num = pd.basis.numerator(i);
        let h = move |x: Complex64| crate::util::poly_eval(&num, x);
        value.push(integrate_differential_between(
            &pd.curve, q, p, &h, waypoints, tol,
        )?);
    }
    Ok(AbelValue { value })
}

/// Abel-map increment between two nearby points on the same lift (fixed-order
/// Gauss panel; both points must be close relative to the branch separation).
pub fn abel_increment_local(
    pd: &PeriodData,
    x0: Complex64,
    y0: Complex64,
    x1: Complex64,
) -> Vec<Complex64> {
    let g = pd.genus();
    let path = PlanePath::polyline(&[x0, x1]);
    let tracker = TrackedBranch::from_start(&path, pd.curve.branch_points().to_vec(), y0);
    // 8-point Gauss-Legendre on [0,1]
    const GX: [f64; 8] = [
        0.019855071751232, 0.101666761293187, 0.237233795041836, 0.408282678752175,
        0.591717321247825, 0.762766204958164, 0.898333238706813, 0.980144928248768,
    ];
    const GW: [f64; 8] = [
        0.050614268145188, 0.111190517226687, 0.156853322938943, 0.181341891689181,
        0.181341891689181, 0.156853322938943, 0.111190517226687, 0.050614268145188,
    ];
    let d = x1 - x0;
    let mut out = vec![Complex64::new(0.0, 0.0); g];
    for k in 0..8 {
        let t = GX[k];
        let x = x0 + d * t;
        let y = tracker.value(&path, 0, t);
        let vals = pd.basis.values_dx(x, y);
        for i in 0..g {
            out[i] += vals[i] * d * GW[k];
        }
    }
    out
}

/// Matrix of normalized b-periods recomputed independently (for tests): row j
/// is the integral of v over the marking cycle g+j.
pub fn recompute_b_periods(pd: &PeriodData, tol: f64) -> Result<DMatrix<Complex64>, SurfaceError> {
    let g = pd.genus();
    let mut out = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
    for j in 0..g {
        for i in 0..g {
            let num = pd.basis.numerator(i);
            let h = move |x: Complex64| crate::util::poly_eval(&num, x);
            out[(j, i)] = pd.cycle_integral(g + j, &h, tol)?;
        }
    }
    Ok(out)
}
