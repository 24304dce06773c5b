//! Odd spinor differentials: enumeration of characteristics, construction of
//! the differential from the theta gradient, its zero divisor, and the
//! homological coordinates of the pair (curve, differential).

mod roots;

pub use roots::{polynomial_roots, RootGroup};

use crate::surface::{
    integrate_differential_between, PeriodData, SurfaceError, SurfacePoint,
};
use crate::theta::{all_characteristics, theta_gradient, Characteristic, ThetaError};
use crate::util::poly_eval;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinorError {
    #[error("characteristic is even; the spinor construction needs an odd one")]
    EvenCharacteristic,
    #[error("theta gradient norm {0:e} below threshold: degenerate spinor (dim H^0 > 1 nearby)")]
    DegenerateSpinor(f64),
    #[error("zeros not labeled; run zero location first")]
    UnlabeledZeros,
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Zero of the spinor square with its multiplicity.
#[derive(Clone, Debug)]
pub struct SpinorZero {
    pub point: SurfacePoint,
    pub multiplicity: usize,
    /// set when several distinct zeros were merged within the cluster radius
    pub cluster: bool,
}

/// The differential sigma = sum_i c_i v_i for an odd characteristic, with its
/// zero divisor. As a form it is P(x) dx / y with P = N^T c.
#[derive(Clone, Debug)]
pub struct SpinorSquare {
    /// characteristic behind the differential; None for a plain P(x) dx / y
    /// differential built directly from coefficients
    pub eta: Option<Characteristic>,
    /// c_i: gradient of theta[eta] at 0
    pub coeffs: Vec<Complex64>,
    /// numerator polynomial coefficients (low to high)
    pub numerator: Vec<Complex64>,
    pub zeros: Vec<SpinorZero>,
    pub has_cluster: bool,
    /// odd multiplicities are a diagnostic, not an error
    pub odd_multiplicity_diagnostic: bool,
    /// overall scale applied on top of the theta-gradient normalization
    pub scale: Complex64,
}

pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-4;
pub const BRANCH_ZERO_RADIUS: f64 = 1e-6;

/// All characteristics of the given parity; 1 = odd.
pub fn enumerate_characteristics(g: usize, parity: u8) -> Vec<Characteristic> {
    all_characteristics(g)
        .into_iter()
        .filter(|c| c.parity() == parity)
        .collect()
}

/// Build the spinor differential for an odd characteristic on a marked curve.
pub fn spinor(pd: &PeriodData, eta: &Characteristic, tol: f64) -> Result<SpinorSquare, SpinorError> {
    spinor_scaled(pd, eta, tol, Complex64::new(1.0, 0.0))
}

/// Spinor with an extra scalar factor (degeneration runs renormalize by powers
/// of the family parameter).
pub fn spinor_scaled(
    pd: &PeriodData,
    eta: &Characteristic,
    tol: f64,
    scale: Complex64,
) -> Result<SpinorSquare, SpinorError> {
    if !eta.is_odd() {
        return Err(SpinorError::EvenCharacteristic);
    }
    let g = pd.genus();
    let zero = vec![Complex64::new(0.0, 0.0); g];
    let grad = theta_gradient(eta, &pd.omega, &zero, tol)?;
    let coeffs: Vec<Complex64> = grad.iter().map(|r| r.value * scale).collect();
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-8 * scale.norm() {
        return Err(SpinorError::DegenerateSpinor(norm));
    }
    // numerator d = N^T c
    let n = &pd.basis.normalization;
    let numerator: Vec<Complex64> = (0..g)
        .map(|k| (0..g).map(|i| n[(i, k)] * coeffs[i]).sum())
        .collect();
    let mut sq = SpinorSquare {
        eta: Some(eta.clone()),
        coeffs,
        numerator,
        zeros: Vec::new(),
        has_cluster: false,
        odd_multiplicity_diagnostic: false,
        scale,
    };
    let zeros = spinor_zeros(pd, &sq, DEFAULT_CLUSTER_RADIUS);
    sq.has_cluster = zeros.iter().any(|z| z.cluster);
    sq.odd_multiplicity_diagnostic = zeros.iter().any(|z| z.multiplicity % 2 == 1);
    sq.zeros = zeros;
    Ok(sq)
}

/// Zero divisor of the spinor differential on the surface.
///
/// The numerator roots are located by the argument principle; a root at a
/// branch point is one zero of doubled multiplicity, a root elsewhere is a
/// zero on each sheet, and a degree drop puts zeros over infinity.
pub fn spinor_zeros(pd: &PeriodData, sq: &SpinorSquare, cluster_radius: f64) -> Vec<SpinorZero> {
    let curve = &pd.curve;
    let g = pd.genus();
    let scale = sq
        .numerator
        .iter()
        .map(|c| c.norm())
        .fold(0.0_f64, f64::max);
    let mut coeffs = sq.numerator.clone();
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() < 1e-12 * scale {
        coeffs.pop();
    }
    let deg = coeffs.len() - 1;
    let mut zeros = Vec::new();
    if deg > 0 {
        for group in polynomial_roots(&coeffs, cluster_radius) {
            let (bi, bd) = curve.nearest_branch(group.center);
            if bd < BRANCH_ZERO_RADIUS.max(2.0 * cluster_radius) {
                zeros.push(SpinorZero {
                    point: SurfacePoint::Branch { index: bi },
                    multiplicity: 2 * group.multiplicity,
                    cluster: group.cluster,
                });
            } else {
                for sheet in [1i8, -1] {
                    zeros.push(SpinorZero {
                        point: SurfacePoint::regular(group.center, sheet),
                        multiplicity: group.multiplicity,
                        cluster: group.cluster,
                    });
                }
            }
        }
    }
    let drop = (g - 1) - deg;
    if drop > 0 {
        if curve.infinity_is_branch() {
            zeros.push(SpinorZero {
                point: SurfacePoint::Infinity { sheet: 1 },
                multiplicity: 2 * drop,
                cluster: false,
            });
        } else {
            for sheet in [1i8, -1] {
                zeros.push(SpinorZero {
                    point: SurfacePoint::Infinity { sheet },
                    multiplicity: drop,
                    cluster: false,
                });
            }
        }
    }
    sort_zeros(curve, &mut zeros);
    debug_assert_eq!(
        zeros.iter().map(|z| z.multiplicity).sum::<usize>(),
        2 * g - 2,
        "total zero multiplicity must be 2g-2"
    );
    zeros
}

/// Deterministic zero labeling: by (Re, Im) of the x-coordinate, sheet +1
/// before -1, infinity last. The relative-path hub is the last zero.
fn sort_zeros(curve: &crate::surface::HyperellipticCurve, zeros: &mut [SpinorZero]) {
    zeros.sort_by(|a, b| {
        let key = |z: &SpinorZero| -> (f64, f64, i8) {
            match z.point {
                SurfacePoint::Regular { x, sheet } => (x.re, x.im, -sheet),
                SurfacePoint::Branch { index } => {
                    let e = curve.branch_points()[index];
                    (e.re, e.im, 0)
                }
                SurfacePoint::Infinity { sheet } => (f64::INFINITY, 0.0, -sheet),
            }
        };
        key(a).partial_cmp(&key(b)).unwrap()
    });
}

/// The 3g-2 homological coordinates of (curve, spinor): g a-periods, g
/// b-periods, and g-2 relative periods from the hub zero to the others.
#[derive(Clone, Debug)]
pub struct HomologicalCoords {
    pub z: Vec<Complex64>,
    /// zeros in label order (the hub is last)
    pub labels: Vec<SpinorZero>,
    /// waypoints of each relative path (empty = straight with detours);
    /// relative periods change by absolute periods under a different choice
    pub relative_paths: Vec<Vec<Complex64>>,
}

/// Any differential P(x) dx / y given by its numerator coefficients, with the
/// a-period vector playing the role of the gradient coefficients.
pub fn differential_from_numerator(
    pd: &PeriodData,
    numerator: Vec<Complex64>,
) -> SpinorSquare {
    let g = pd.genus();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); g];
    for j in 0..g {
        for k in 0..numerator.len().min(g) {
            coeffs[j] += pd.pa[(j, k)] * numerator[k];
        }
    }
    let mut sq = SpinorSquare {
        eta: None,
        coeffs,
        numerator,
        zeros: Vec::new(),
        has_cluster: false,
        odd_multiplicity_diagnostic: false,
        scale: Complex64::new(1.0, 0.0),
    };
    let zeros = spinor_zeros(pd, &sq, DEFAULT_CLUSTER_RADIUS);
    sq.has_cluster = zeros.iter().any(|z| z.cluster);
    sq.odd_multiplicity_diagnostic = zeros.iter().any(|z| z.multiplicity % 2 == 1);
    sq.zeros = zeros;
    sq
}

/// Compute homological coordinates. The a-periods are the theta-gradient
/// coefficients by normalization; the b-periods are Omega c; the relative
/// periods are path integrals of the spinor between its zeros.
pub fn homological_coordinates(
    pd: &PeriodData,
    sq: &SpinorSquare,
    tol: f64,
) -> Result<HomologicalCoords, SpinorError> {
    let g = pd.genus();
    let mut z = Vec::with_capacity(3 * g - 2);
    z.extend_from_slice(&sq.coeffs);
    let om = pd.omega.matrix();
    for j in 0..g {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..g {
            s += om[(i, j)] * sq.coeffs[i];
        }
        z.push(s);
    }
    // zeros in label order; hub last (genus 1 has no zeros at all)
    let labels = sq.zeros.clone();
    let mut relative_paths = Vec::new();
    if let Some(hub_zero) = labels.last() {
        let hub = hub_zero.point;
        let num = sq.numerator.clone();
        let h = move |x: Complex64| poly_eval(&num, x);
        for zer in labels.iter().take(labels.len() - 1) {
            let (val, waypoints) = relative_period(pd, &hub, &zer.point, &h, tol)?;
            z.push(val);
            relative_paths.push(waypoints);
        }
    }
    Ok(HomologicalCoords {
        z,
        labels,
        relative_paths,
    })
}

/// Integral of the spinor from the hub to the zero p_j; same-x opposite-sheet
/// pairs are routed through the nearest branch point.
fn relative_period(
    pd: &PeriodData,
    from: &SurfacePoint,
    to: &SurfacePoint,
    h: &dyn Fn(Complex64) -> Complex64,
    tol: f64,
) -> Result<(Complex64, Vec<Complex64>), SpinorError> {
    let curve = &pd.curve;
    if let (
        SurfacePoint::Regular { x: x0, sheet: s0 },
        SurfacePoint::Regular { x: x1, sheet: s1 },
    ) = (from, to)
    {
        if (x0 - x1).norm() < 1e-9 && s0 != s1 {
            // route through the nearest branch point
            let (bi, _) = curve.nearest_branch(*x0);
            let mid = SurfacePoint::Branch { index: bi };
            let a = integrate_differential_between(curve, from, &mid, h, &[], tol)?;
            let b = integrate_differential_between(curve, &mid, to, h, &[], tol)?;
            return Ok((a + b, vec![curve.branch_points()[bi]]));
        }
    }
    let v = integrate_differential_between(curve, from, to, h, &[], tol)?;
    Ok((v, Vec::new()))
}

/// Pointwise value of the spinor differential (dx-coefficient) at a regular point.
pub fn spinor_value_dx(
    sq: &SpinorSquare,
    curve: &crate::surface::HyperellipticCurve,
    p: &SurfacePoint,
) -> Option<Complex64> {
    let x = curve.x_of(p)?;
    let y = curve.y_of(p)?;
    if y.norm() == 0.0 {
        return None;
    }
    Some(poly_eval(&sq.numerator, x) / y)
}
