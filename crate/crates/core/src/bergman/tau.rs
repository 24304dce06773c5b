//! The defining one-form of log tau in homological coordinates, the bilinear
//! residue identity that pins its homogeneity, and path integration of
//! d log tau along families in the stratum.

use super::cycles::{cycle_integrals, cycle_integrals_with, ContourOpts, CycleIntegrals};
use super::kernel::BergmanKernel;
use super::BergmanError;
use crate::spinor::{homological_coordinates, HomologicalCoords, SpinorSquare};
use crate::surface::PeriodData;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Coefficients of d log tau in the homological coordinate basis:
/// entry k is -(6 / pi i) * int over s_k of (S_B - S_omega)/omega.
#[derive(Clone, Debug)]
pub struct TauLogDerivative {
    pub coefficients: Vec<Complex64>,
}

impl TauLogDerivative {
    pub fn from_integrals(integrals: &CycleIntegrals) -> Self {
        let f = Complex64::new(0.0, -6.0 / PI);
        // -(6/(pi i)) = -6/(pi i) = 6 i / pi ... keep it explicit:
        let factor = -6.0 / (Complex64::new(0.0, PI));
        let _ = f;
        Self {
            coefficients: integrals.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// One point of the stratum with everything d log tau needs.
pub struct StratumPoint {
    pub z: Vec<Complex64>,
    pub integrals: Vec<Complex64>,
    pub residues: Vec<Complex64>,
    pub zero_multiplicities: Vec<usize>,
    pub has_cluster: bool,
}

/// Homological coordinates and dual-basis integrals for one (curve, spinor).
pub fn tau_one_form(
    pd: &PeriodData,
    sq: &SpinorSquare,
    theta_tol: f64,
    quad_tol: f64,
) -> Result<StratumPoint, BergmanError> {
    let coords = homological_coordinates(pd, sq, quad_tol)?;
    let kernel = BergmanKernel::new(pd, theta_tol)?;
    let integrals = cycle_integrals(&kernel, sq, &coords, quad_tol)?;
    Ok(StratumPoint {
        z: coords.z.clone(),
        integrals: integrals.values.clone(),
        residues: integrals.residues,
        zero_multiplicities: coords.labels.iter().map(|z| z.multiplicity).collect(),
        has_cluster: sq.has_cluster,
    })
}

/// Options for building the tau one-form.
#[derive(Clone, Copy, Debug)]
pub struct TauOpts {
    pub theta_tol: f64,
    pub contour: ContourOpts,
    /// cheap projective-connection stencil (exponent fits)
    pub fast_stencil: bool,
}

impl Default for TauOpts {
    fn default() -> Self {
        Self {
            theta_tol: 1e-13,
            contour: ContourOpts::default(),
            fast_stencil: false,
        }
    }
}

/// Tau one-form with explicit tolerances and stencil choice.
pub fn tau_one_form_opts(
    pd: &PeriodData,
    sq: &SpinorSquare,
    opts: TauOpts,
) -> Result<StratumPoint, BergmanError> {
    let coords = homological_coordinates(pd, sq, opts.contour.quad_tol.max(1e-10))?;
    let kernel = if opts.fast_stencil {
        BergmanKernel::new(pd, opts.theta_tol)?.fast()
    } else {
        BergmanKernel::new(pd, opts.theta_tol)?
    };
    let integrals = cycle_integrals_with(&kernel, sq, &coords, opts.contour)?;
    Ok(StratumPoint {
        z: coords.z.clone(),
        integrals: integrals.values.clone(),
        residues: integrals.residues,
        zero_multiplicities: coords.labels.iter().map(|z| z.multiplicity).collect(),
        has_cluster: sq.has_cluster,
    })
}

/// Same but with precomputed coordinates (to reuse a coordinate labeling).
pub fn tau_one_form_with_coords(
    pd: &PeriodData,
    sq: &SpinorSquare,
    coords: &HomologicalCoords,
    theta_tol: f64,
    quad_tol: f64,
) -> Result<StratumPoint, BergmanError> {
    let kernel = BergmanKernel::new(pd, theta_tol)?;
    let integrals = cycle_integrals(&kernel, sq, coords, quad_tol)?;
    Ok(StratumPoint {
        z: coords.z.clone(),
        integrals: integrals.values.clone(),
        residues: integrals.residues,
        zero_multiplicities: coords.labels.iter().map(|z| z.multiplicity).collect(),
        has_cluster: sq.has_cluster,
    })
}

#[derive(Clone, Debug)]
pub struct RbrReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub defect: f64,
}

/// The pairing identity: sum_k z_k int_{s_k} (S_B - S_omega)/omega equals
/// -pi i (d + sum_k (m_k - 1/(1+m_k))) over the zero data.
pub fn rbr_identity(point: &StratumPoint) -> RbrReport {
    let lhs: Complex64 = point
        .z
        .iter()
        .zip(&point.integrals)
        .map(|(z, i)| z * i)
        .sum();
    let d = point.zero_multiplicities.len() as f64;
    let msum: f64 = point
        .zero_multiplicities
        .iter()
        .map(|&m| m as f64 - 1.0 / (1.0 + m as f64))
        .sum();
    let rhs = Complex64::new(0.0, -PI) * (d + msum);
    let scale: f64 = point
        .z
        .iter()
        .zip(&point.integrals)
        .map(|(z, i)| z.norm() * i.norm())
        .sum::<f64>()
        .max(rhs.norm());
    let defect = (lhs - rhs).norm() / scale.max(1e-300);
    RbrReport { lhs, rhs, defect }
}

/// Trapezoid integration of d log tau through a sequence of stratum points,
/// with a step-halving error estimate from the even-index subsequence.
pub fn integrate_dlogtau(points: &[StratumPoint]) -> Result<(Complex64, f64), BergmanError> {
    assert!(points.len() >= 3, "need at least three points");
    let factor = -6.0 / Complex64::new(0.0, PI);
    let n_coord = points[0].z.len();
    let step_sum = |pts: Vec<&StratumPoint>| -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            for k in 0..n_coord {
                let avg = 0.5 * (a.integrals[k] + b.integrals[k]);
                total += factor * avg * (b.z[k] - a.z[k]);
            }
        }
        total
    };
    let fine = step_sum(points.iter().collect());
    let coarse = step_sum(points.iter().step_by(2).collect());
    if !fine.re.is_finite() || !fine.im.is_finite() {
        return Err(BergmanError::StepEstimateDiverges {
            coarse: coarse.norm(),
            fine: fine.norm(),
        });
    }
    // Richardson: the trapezoid error is O(h^2), so (4 fine - coarse)/3 kills
    // the leading term; the difference provides the step estimate
    let extrap = (fine * 4.0 - coarse) / 3.0;
    let err = (fine - coarse).norm() / 3.0;
    Ok((extrap, err))
}

/// Scaling-path run data: the fitted exponent, the step estimate, and the
/// per-step one-form increments.
#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub exponent: Complex64,
    pub step_estimate: f64,
    pub params: Vec<f64>,
    pub increments: Vec<Complex64>,
}

/// Scaling-path exponent: integrate d log tau along omega -> t omega for
/// t in [1, 2] and divide by log 2. The homogeneity of tau makes this
/// 16(g-1) exactly in the limit.
pub fn scaling_exponent(
    pd: &PeriodData,
    eta: &crate::theta::Characteristic,
    theta_tol: f64,
    quad_tol: f64,
    steps: usize,
) -> Result<(Complex64, f64), BergmanError> {
    let run = scaling_run(pd, eta, theta_tol, quad_tol, steps)?;
    Ok((run.exponent, run.step_estimate))
}

/// Scaling-path run with per-step data for reports.
pub fn scaling_run(
    pd: &PeriodData,
    eta: &crate::theta::Characteristic,
    theta_tol: f64,
    quad_tol: f64,
    steps: usize,
) -> Result<ScalingRun, BergmanError> {
    // precompute the kernel once; the contours and S_B do not change along a
    // pure scaling family, only the coordinates and the 1/t factor do
    let kernel = BergmanKernel::new(pd, theta_tol)?;
    let mut points = Vec::with_capacity(2 * steps + 1);
    for k in 0..=(2 * steps) {
        let t = 1.0 + (k as f64) / (2.0 * steps as f64);
        let sq = crate::spinor::spinor_scaled(pd, eta, theta_tol, Complex64::new(t, 0.0))?;
        let coords = homological_coordinates(pd, &sq, quad_tol)?;
        let integrals = cycle_integrals(&kernel, &sq, &coords, quad_tol)?;
        points.push(StratumPoint {
            z: coords.z.clone(),
            integrals: integrals.values.clone(),
            residues: integrals.residues,
            zero_multiplicities: coords.labels.iter().map(|z| z.multiplicity).collect(),
            has_cluster: sq.has_cluster,
        });
    }
    if points.iter().any(|p| p.has_cluster) {
        return Err(BergmanError::PathLeavesStratum);
    }
    let (delta, err) = integrate_dlogtau(&points)?;
    // per-step increments on the fine grid
    let factor = -6.0 / Complex64::new(0.0, PI);
    let mut increments = Vec::new();
    let mut params = Vec::new();
    for k in 0..points.len() - 1 {
        let mut d = Complex64::new(0.0, 0.0);
        for c in 0..points[k].z.len() {
            let avg = 0.5 * (points[k].integrals[c] + points[k + 1].integrals[c]);
            d += factor * avg * (points[k + 1].z[c] - points[k].z[c]);
        }
        params.push(1.0 + (k as f64 + 0.5) / (2.0 * steps as f64));
        increments.push(d);
    }
    Ok(ScalingRun {
        exponent: delta / (2.0_f64).ln(),
        step_estimate: err / (2.0_f64).ln(),
        params,
        increments,
    })
}
