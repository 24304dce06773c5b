//! Exponent checks along degenerating families: period-matrix expansions,
//! theta and spinor boundary regimes, and tau boundary exponents.

use super::family::{DegenerationFamily, FamilyKind, FamilyPoint};
use super::fit::{fit_exponent, ExponentFit};
use super::DegenError;
use crate::bergman::{tau_one_form_opts, ContourOpts, StratumPoint, TauOpts};
use rayon::prelude::*;
use crate::spinor::{homological_coordinates, spinor_scaled, spinor_value_dx};
use crate::surface::{differential_value, Chart, SurfacePoint};
use crate::theta::{Characteristic, SymplecticMap, ThetaEvaluator};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// First-order structure of the period matrix along a reducible family.
///
/// In the cluster-scaling realization the first-order correction of the
/// period matrix sits in the off-diagonal (cross) block and factorizes over
/// the node values of the limit differentials; the diagonal blocks converge
/// at second order. The scalar calibration between the family parameter and
/// the plumbing parameter is fitted from the cross block (it comes out at
/// modulus 4 in the canonical square-root node charts, with a branch-dependent
/// sign).
#[derive(Clone, Debug)]
pub struct FirstOrderReport {
    /// fitted decay slope of the off-diagonal block against the plumbing
    pub offdiag_slope: ExponentFit,
    /// singular-value ratio of the cross block at the smallest grid parameter
    /// (rank-1 test; meaningful when both blocks have dimension >= 2)
    pub singular_ratio: f64,
    /// fitted scalar between the cross block and (pi i/2) R_in R_out^T
    pub kappa: Complex64,
    /// relative defect of the cross block against the fitted outer product
    pub outer_product_defect: f64,
}

/// Node values R_i of the normalized limit differentials in the canonical
/// plumbing charts.
pub fn node_vector(family: &DegenerationFamily) -> Result<Vec<Complex64>, DegenError> {
    let (j, g) = match family.kind {
        FamilyKind::Reducible { j } => (j, family.genus),
        _ => return Err(DegenError::CharacteristicBlockMismatch),
    };
    let inner = family.limit.inner.as_ref().unwrap();
    let outer = family.limit.outer.as_ref().unwrap();
    let node = family.limit.outer_node_index.unwrap();
    let mut r = Vec::with_capacity(g);
    for i in 0..j {
        r.push(differential_value(
            &inner.curve,
            &inner.basis,
            i,
            &SurfacePoint::Infinity { sheet: 1 },
            &Chart::InvSqrtX,
        )?);
    }
    for i in 0..(g - j) {
        r.push(differential_value(
            &outer.curve,
            &outer.basis,
            i,
            &SurfacePoint::Branch { index: node },
            &Chart::SqrtBranch { index: node },
        )?);
    }
    Ok(r)
}

/// Fitted calibration scalar between the measured first-order cross block and
/// the node-value outer product (pi i/2) R_in R_out^T.
pub fn fitted_kappa(family: &DegenerationFamily) -> Result<Complex64, DegenError> {
    let j = match family.kind {
        FamilyKind::Reducible { j } => j,
        _ => return Err(DegenError::CharacteristicBlockMismatch),
    };
    let g = family.genus;
    let r = node_vector(family)?;
    let p = family.points.last().unwrap();
    let mut num = cx(0.0, 0.0);
    let mut den = 0.0_f64;
    for a in 0..j {
        for b in j..g {
            let model = cx(0.0, 0.5 * std::f64::consts::PI) * r[a] * r[b];
            let meas = p.pd.omega.matrix()[(a, b)] / p.plumbing;
            num += meas * model.conj();
            den += model.norm_sqr();
        }
    }
    Ok(num / den)
}

/// Off-diagonal decay and rank-1 structure of Omega_t along a reducible family.
pub fn reducible_first_order(family: &DegenerationFamily) -> Result<FirstOrderReport, DegenError> {
    let j = match family.kind {
        FamilyKind::Reducible { j } => j,
        _ => return Err(DegenError::CharacteristicBlockMismatch),
    };
    let g = family.genus;
    let mut params = Vec::new();
    let mut offdiag = Vec::new();
    for p in &family.points {
        let om = p.pd.omega.matrix();
        let mut worst = 0.0_f64;
        for a in 0..j {
            for b in j..g {
                worst = worst.max(om[(a, b)].norm());
            }
        }
        params.push(p.plumbing);
        offdiag.push(worst);
    }
    let offdiag_slope = fit_exponent(&params, &offdiag, 1e-11);
    // cross block of the first-order correction at the smallest parameter
    let last = family.points.last().unwrap();
    let cross = DMatrix::from_fn(j, g - j, |a, b| {
        last.pd.omega.matrix()[(a, j + b)] / last.plumbing
    });
    let svd = cross.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let singular_ratio = if sv.len() > 1 { sv[1] / sv[0] } else { 0.0 };
    let kappa = fitted_kappa(family)?;
    let r = node_vector(family)?;
    let model = DMatrix::from_fn(j, g - j, |a, b| {
        kappa * cx(0.0, 0.5 * std::f64::consts::PI) * r[a] * r[j + b]
    });
    let defect = (&cross - &model).norm() / model.norm();
    Ok(FirstOrderReport {
        offdiag_slope,
        singular_ratio,
        kappa,
        outer_product_defect: defect,
    })
}

#[derive(Clone, Copy, Debug)]
pub enum ThetaRegime {
    /// reducible: residual after the first-order term decays like t^2
    ReducibleSecondOrder,
    /// irreducible with pinched half-integer top bit: |theta| ~ t^{1/8}
    IrreducibleOddPinch,
    /// irreducible with integer top bit: theta - limit ~ t^{1/2}
    IrreducibleEvenPinch,
}

/// The pinch bits of the last handle: (top, bottom).
pub fn pinch_bits(eta: &Characteristic) -> (u8, u8) {
    let g = eta.genus();
    (eta.top(g - 1), eta.bottom(g - 1))
}

/// Theta asymptotics along a degenerating family.
pub fn check_theta_degeneration(
    family: &DegenerationFamily,
    eta: &Characteristic,
    w: &[Complex64],
    regime: ThetaRegime,
    tol: f64,
) -> Result<ExponentFit, DegenError> {
    let g = family.genus;
    if eta.genus() != g || w.len() != g {
        return Err(DegenError::CharacteristicBlockMismatch);
    }
    let mut params = Vec::new();
    let mut values = Vec::new();
    match regime {
        ThetaRegime::ReducibleSecondOrder => {
            let j = match family.kind {
                FamilyKind::Reducible { j } => j,
                _ => return Err(DegenError::CharacteristicBlockMismatch),
            };
            let (eta1, eta2) = eta.split(j);
            let inner = family.limit.inner.as_ref().unwrap();
            let outer = family.limit.outer.as_ref().unwrap();
            let w1 = &w[..j];
            let w2 = &w[j..];
            let ev1 = ThetaEvaluator::new(&eta1, &inner.omega, tol, 1)?;
            let ev2 = ThetaEvaluator::new(&eta2, &outer.omega, tol, 1)?;
            let (t1, g1, _) = ev1.eval(w1, 1)?;
            let (t2, g2, _) = ev2.eval(w2, 1)?;
            // first-order response of theta1 * theta2 to the cross-block
            // period correction kappa (pi i/2) t R_a R_b
            let r = node_vector(family)?;
            let kappa = fitted_kappa(family)?;
            let mut lin = cx(0.0, 0.0);
            for a in 0..j {
                for b in j..g {
                    lin += g1[a].value * g2[b - j].value * r[a] * r[b];
                }
            }
            lin *= kappa / 4.0;
            let product = t1.value * t2.value;
            for p in &family.points {
                let evt = ThetaEvaluator::new(eta, &p.pd.omega, tol, 0)?;
                let (tv, _, _) = evt.eval(w, 0)?;
                let resid = tv.value - product - cx(p.plumbing, 0.0) * lin;
                params.push(p.plumbing);
                values.push(resid.norm());
            }
        }
        ThetaRegime::IrreducibleOddPinch => {
            if pinch_bits(eta).0 != 1 {
                return Err(DegenError::CharacteristicBlockMismatch);
            }
            for p in &family.points {
                let evt = ThetaEvaluator::new(eta, &p.pd.omega, tol, 0)?;
                let (tv, _, _) = evt.eval(w, 0)?;
                params.push(p.plumbing);
                values.push(tv.value.norm());
            }
        }
        ThetaRegime::IrreducibleEvenPinch => {
            if pinch_bits(eta).0 != 0 {
                return Err(DegenError::CharacteristicBlockMismatch);
            }
            let (eta1, _) = eta.split(g - 1);
            let outer = family.limit.outer.as_ref().unwrap();
            let w1 = &w[..g - 1];
            let ev1 = ThetaEvaluator::new(&eta1, &outer.omega, tol, 0)?;
            let (t1, _, _) = ev1.eval(w1, 0)?;
            for p in &family.points {
                let evt = ThetaEvaluator::new(eta, &p.pd.omega, tol, 0)?;
                let (tv, _, _) = evt.eval(w, 0)?;
                params.push(p.plumbing);
                values.push((tv.value - t1.value).norm());
            }
        }
    }
    Ok(fit_exponent(&params, &values, 1e-11))
}

#[derive(Clone, Copy, Debug)]
pub enum SpinorRegime {
    /// reducible, outer-side compact: |sigma| ~ t
    ReducibleOuterLinear,
    /// reducible, cluster-side compact in the inner chart: |sigma| ~ const
    ReducibleInnerConstant,
    /// irreducible odd pinch: |sigma| ~ t^{1/8}
    IrreducibleOddPinch,
    /// irreducible even pinch: consecutive differences ~ r = sqrt(t)
    IrreducibleEvenPinchCorrection,
}

/// Spinor decay exponents on fixed compacta away from the node region.
pub fn check_spinor_degeneration(
    family: &DegenerationFamily,
    eta: &Characteristic,
    sample: Complex64,
    regime: SpinorRegime,
    tol: f64,
) -> Result<ExponentFit, DegenError> {
    // guard the sample from the shrinking region
    if let FamilyKind::Irreducible | FamilyKind::ZgCollision = family.kind {
        let t0 = family.points[0].param;
        if (sample - family.points[0].pd.curve.branch_points()[2 * family.genus - 2]).norm()
            < 10.0 * t0.sqrt()
        {
            return Err(DegenError::SamplePointEntersNodeRegion(t0));
        }
    }
    let mut params = Vec::new();
    let mut values = Vec::new();
    let mut raw = Vec::new();
    for p in &family.points {
        let sq = spinor_scaled(&p.pd, eta, tol, cx(1.0, 0.0))?;
        let x = match regime {
            SpinorRegime::ReducibleInnerConstant => sample * p.param, // x = s * u
            _ => sample,
        };
        let pt = SurfacePoint::regular(x, 1);
        let v = spinor_value_dx(&sq, &p.pd.curve, &pt).unwrap();
        let v = match regime {
            // du-chart value: multiply by dx/du = s
            SpinorRegime::ReducibleInnerConstant => v * p.param,
            _ => v,
        };
        params.push(p.plumbing);
        raw.push(v);
        values.push(v.norm());
    }
    match regime {
        SpinorRegime::IrreducibleEvenPinchCorrection => {
            // fit |sigma(r_k) - sigma(r_{k+1})| against r_k: slope 1 in r
            let rs: Vec<f64> = params.iter().map(|t| t.sqrt()).collect();
            let diffs: Vec<f64> = raw.windows(2).map(|w| (w[0] - w[1]).norm()).collect();
            Ok(fit_exponent(&rs[..diffs.len()], &diffs, 1e-11))
        }
        _ => Ok(fit_exponent(&params, &values, 1e-11)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauBoundary {
    /// odd pinch, spinor renormalized by t^{-1/8}: exponent 6
    A0,
    /// even pinch, abscissa r = sqrt(t): exponent 16
    B0,
    /// reducible: exponent 16(g-j) against the plumbing parameter
    AjBj,
    /// merging zeros: intrinsic slope 16/5 against the vanishing coordinate
    Zg,
}

#[derive(Clone, Debug)]
pub struct TauExponentRun {
    pub abscissa: Vec<f64>,
    pub increments: Vec<Complex64>,
    pub slopes: Vec<f64>,
    pub final_slope: f64,
    pub confidence: f64,
}

/// d log tau / d log(abscissa) along the family, with the boundary-appropriate
/// spinor normalization and abscissa.
pub fn fit_tau_boundary_exponent(
    family: &DegenerationFamily,
    eta: &Characteristic,
    boundary: TauBoundary,
    theta_tol: f64,
    quad_tol: f64,
) -> Result<TauExponentRun, DegenError> {
    let opts = TauOpts {
        theta_tol,
        contour: ContourOpts {
            quad_tol,
            rel_tol: 3e-6,
        },
        fast_stencil: true,
    };
    let results: Vec<Result<(f64, StratumPoint), DegenError>> = family
        .points
        .par_iter()
        .map(|p| {
            let scale = match boundary {
                TauBoundary::A0 => cx(p.plumbing.powf(-0.125), 0.0),
                _ => cx(1.0, 0.0),
            };
            let sq = spinor_scaled(&p.pd, eta, theta_tol, scale)?;
            if boundary != TauBoundary::Zg && sq.has_cluster {
                return Err(DegenError::FamilyLeavesTransversalSlice(
                    "spinor zeros collide along the family".into(),
                ));
            }
            let point = tau_one_form_opts(&p.pd, &sq, opts)?;
            let a = match boundary {
                TauBoundary::A0 | TauBoundary::AjBj => p.plumbing,
                TauBoundary::B0 => p.plumbing.sqrt(),
                TauBoundary::Zg => point.z.last().unwrap().norm(),
            };
            Ok((a, point))
        })
        .collect();
    let mut strata: Vec<StratumPoint> = Vec::new();
    let mut abscissa = Vec::new();
    for r in results {
        let (a, point) = r?;
        abscissa.push(a);
        strata.push(point);
    }
    let mut increments = Vec::new();
    let mut slopes = Vec::new();
    for k in 0..strata.len() - 1 {
        let pair = [&strata[k], &strata[k + 1]];
        let mut d = cx(0.0, 0.0);
        for c in 0..pair[0].z.len() {
            let avg = 0.5 * (pair[0].integrals[c] + pair[1].integrals[c]);
            d += (-6.0 / cx(0.0, std::f64::consts::PI)) * avg * (pair[1].z[c] - pair[0].z[c]);
        }
        increments.push(d);
        slopes.push(d.re / (abscissa[k + 1].ln() - abscissa[k].ln()));
    }
    let final_slope = *slopes.last().unwrap();
    let confidence = (final_slope - slopes[slopes.len() - 2]).abs();
    Ok(TauExponentRun {
        abscissa,
        increments,
        slopes,
        final_slope,
        confidence,
    })
}

/// Transporting the marking around the collision (the Dehn twist on the last
/// handle) multiplies the spinor by an eighth root of unity; returns the worst
/// |ratio^8 - 1| over a few sample points.
pub fn marking_twist_ratio(
    pd: &crate::surface::PeriodData,
    eta: &Characteristic,
    tol: f64,
) -> Result<f64, DegenError> {
    let g = pd.genus();
    // sigma: a' = a, b'_g = b_g + a_g
    let mut s21 = DMatrix::<i64>::zeros(g, g);
    s21[(g - 1, g - 1)] = 1;
    let sigma = SymplecticMap::new(
        DMatrix::identity(g, g),
        DMatrix::zeros(g, g),
        s21,
        DMatrix::identity(g, g),
    )?;
    let marking2 = pd.marking.transformed(&sigma);
    let pd2 = crate::surface::period_matrix(&pd.curve, &marking2, pd.quad_tol)?;
    let eta2 = sigma.act_on_characteristic(eta);
    let sq1 = spinor_scaled(pd, eta, tol, cx(1.0, 0.0))?;
    let sq2 = spinor_scaled(&pd2, &eta2, tol, cx(1.0, 0.0))?;
    let mut worst = 0.0_f64;
    for k in 0..5 {
        let x = pd.curve.base_point() + cx(0.17 * k as f64, -0.4 - 0.09 * k as f64);
        let pt = SurfacePoint::regular(x, 1);
        let v1 = spinor_value_dx(&sq1, &pd.curve, &pt).unwrap();
        let v2 = spinor_value_dx(&sq2, &pd2.curve, &pt).unwrap();
        let ratio = v2 / v1;
        worst = worst.max((ratio.powu(8) - 1.0).norm());
    }
    Ok(worst)
}

/// Homological coordinates of the designated spinor at the smallest family
/// parameter (cluster diagnostics for merging zeros).
pub fn terminal_coordinates(
    family: &DegenerationFamily,
    eta: &Characteristic,
    tol: f64,
) -> Result<(crate::spinor::SpinorSquare, crate::spinor::HomologicalCoords), DegenError> {
    let p: &FamilyPoint = family.points.last().unwrap();
    let sq = spinor_scaled(&p.pd, eta, tol, cx(1.0, 0.0))?;
    let coords = homological_coordinates(&p.pd, &sq, tol.max(1e-10))?;
    Ok((sq, coords))
}
