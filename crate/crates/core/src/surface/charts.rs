//! Declared local parameters on the hyperelliptic surface and values of the
//! normalized differentials in them.

use super::periods::DifferentialBasis;
use super::sheet::rotated_sqrt;
use super::{HyperellipticCurve, SurfaceError, SurfacePoint};
use crate::util::poly_eval;
use num_complex::Complex64;

/// Declared local parameter.
///
/// - `Affine`: zeta = x - x0 at a regular point.
/// - `SqrtBranch`: zeta^2 = x - e_i at a finite branch point, with the
///   canonical branch fixed by the rotated-principal square-root product.
/// - `InvX`: zeta = 1/x at one of the two points over infinity (even models).
/// - `InvSqrtX`: zeta^2 = 1/x at the branch point over infinity (odd models).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart {
    Affine { center: Complex64 },
    SqrtBranch { index: usize },
    InvX,
    InvSqrtX,
}

/// Canonical co-factor W(x) = y / zeta near branch point e_i, with
/// W(e_i) = prod_{j != i} rotated_sqrt(e_i - e_j).
pub fn branch_cofactor(curve: &HyperellipticCurve, index: usize) -> Complex64 {
    let e = curve.branch_points()[index];
    curve
        .branch_points()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .map(|(_, &f)| rotated_sqrt(e - f))
        .product()
}

/// Value of the normalized differential v_i in the given chart at p.
pub fn differential_value(
    curve: &HyperellipticCurve,
    basis: &DifferentialBasis,
    i: usize,
    p: &SurfacePoint,
    chart: &Chart,
) -> Result<Complex64, SurfaceError> {
    let num = basis.numerator(i);
    match (chart, p) {
        (Chart::Affine { .. }, SurfacePoint::Regular { x, sheet }) => {
            let y = curve.reference_y(*x) * (*sheet as f64);
            Ok(poly_eval(&num, *x) / y)
        }
        (Chart::SqrtBranch { index }, SurfacePoint::Branch { index: pi }) => {
            if index != pi {
                return Err(SurfaceError::ChartMismatch(format!(
                    "chart at branch {index}, point at branch {pi}"
                )));
            }
            let e = curve.branch_points()[*index];
            let w = branch_cofactor(curve, *index);
            // v/dzeta = 2 P(e) / W(e)
            Ok(2.0 * poly_eval(&num, e) / w)
        }
        (Chart::SqrtBranch { index }, SurfacePoint::Regular { x, sheet }) => {
            // zeta = y / W(x) continued from the branch point along the straight line
            let e = curve.branch_points()[*index];
            let y = curve.reference_y(*x) * (*sheet as f64);
            let path = super::path::PlanePath::polyline(&[e, *x]);
            let reduced: Vec<Complex64> = curve
                .branch_points()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != *index)
                .map(|(_, &z)| z)
                .collect();
            let tracker =
                super::sheet::TrackedBranch::from_start(&path, reduced, branch_cofactor(curve, *index));
            let w = tracker.end_value(&path);
            let zeta = y / w;
            // v/dzeta = (P(x)/y) * dx/dzeta = (P(x)/y) * 2 zeta
            Ok(poly_eval(&num, *x) / y * 2.0 * zeta)
        }
        (Chart::InvX, SurfacePoint::Infinity { sheet }) => {
            if curve.infinity_is_branch() {
                return Err(SurfaceError::ChartMismatch(
                    "InvX chart needs an even model".into(),
                ));
            }
            let g = curve.genus();
            Ok(-basis.normalization[(i, g - 1)] * (*sheet as f64))
        }
        (Chart::InvSqrtX, SurfacePoint::Infinity { .. }) => {
            if !curve.infinity_is_branch() {
                return Err(SurfaceError::ChartMismatch(
                    "InvSqrtX chart needs an odd model".into(),
                ));
            }
            let g = curve.genus();
            Ok(-2.0 * basis.normalization[(i, g - 1)])
        }
        _ => Err(SurfaceError::ChartMismatch(format!(
            "chart {chart:?} does not contain point {p:?}"
        ))),
    }
}
