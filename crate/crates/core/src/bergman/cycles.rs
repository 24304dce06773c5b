//! Cycle integrals of the meromorphic one-form q = (S_B - S_omega)/omega over
//! the basis dual to (a-cycles, b-cycles, relative paths): s_j = -b_j,
//! s_{g+j} = a_j, s_{2g+j} = a small positive circle around the zero p_j,
//! with the loop representatives corrected so they do not pair with the
//! relative paths.

use super::kernel::BergmanKernel;
use super::schwarzian::schwarzian_exact;
use super::BergmanError;
use crate::spinor::{HomologicalCoords, SpinorSquare};
use crate::surface::{
    loop_for_gap_avoiding, loop_samples, HalfGap, LiftedPolyline, OrientedLoop, PeriodData,
    PlanePath, SurfacePoint, TrackedBranch,
};
use crate::util::{cross_sign, segment_intersection};
use num_complex::Complex64;

/// Integrals of q over the dual basis, plus the raw residues at the zeros.
#[derive(Clone, Debug)]
pub struct CycleIntegrals {
    /// length 3g-2, ordered (s_1..s_g, s_{g+1}..s_{2g}, circles)
    pub values: Vec<Complex64>,
    /// residue of q at each zero, in label order
    pub residues: Vec<Complex64>,
    /// prime-form characteristic used for the Bergman kernel
    pub delta: crate::theta::Characteristic,
}

struct QIntegrand<'a, 'b> {
    kernel: &'b BergmanKernel<'a>,
    numerator: Vec<Complex64>,
    pole_xs: Vec<Complex64>,
}

impl<'a, 'b> QIntegrand<'a, 'b> {
    fn local_scale(&self, x: Complex64) -> f64 {
        let curve = &self.kernel.pd.curve;
        let mut d = f64::INFINITY;
        for &e in curve.branch_points() {
            d = d.min((x - e).norm());
        }
        for &p in &self.pole_xs {
            d = d.min((x - p).norm());
        }
        (0.5 * d).max(1e-9)
    }

    /// dx-coefficient of q at a lifted point.
    fn eval(&self, x: Complex64, ylift: Complex64) -> Result<Complex64, BergmanError> {
        let curve = &self.kernel.pd.curve;
        let sb = self
            .kernel
            .projective_connection_x(x, ylift, self.local_scale(x))?
            .value;
        let sw = schwarzian_exact(&self.numerator, curve.branch_points(), x)?;
        let p = crate::util::poly_eval(&self.numerator, x);
        Ok((sb - sw) * ylift / p)
    }
}

/// Crossing number of a closed single-lift loop with a lifted open path: each
/// transversal plane crossing contributes sign(u x v) when the lifts agree.
fn loop_path_crossings(loop_s: &[(Complex64, Complex64, Complex64)], path: &LiftedPolyline) -> i64 {
    let mut total = 0i64;
    for i in 0..loop_s.len() {
        let (a0, ya, da) = loop_s[i];
        let (a1, _, _) = loop_s[(i + 1) % loop_s.len()];
        for j in 0..path.points.len().saturating_sub(1) {
            let b0 = path.points[j];
            let b1 = path.points[j + 1];
            if let Some((s, t)) = segment_intersection(a0, a1, b0, b1) {
                let _ = s;
                let yb = path.lifts[j] * (1.0 - t) + path.lifts[j + 1] * t;
                let matched = (ya - yb).norm() <= (ya + yb).norm();
                if std::env::var("SPINLAB_DEBUG_CROSSINGS_VERBOSE").is_ok() {
                    eprintln!(
                        "  crossing at {} matched={} sign={} ya={} yb={}",
                        a0 + (a1 - a0) * s,
                        matched,
                        cross_sign(da, path.motions[j]).signum(),
                        ya,
                        yb
                    );
                }
                if matched {
                    total += cross_sign(da, path.motions[j]).signum() as i64;
                }
            }
        }
    }
    total
}

/// Lifted polyline of the relative path between two zeros, matching the path
/// construction used for the relative periods.
fn lifted_relative_path(
    pd: &PeriodData,
    from: &SurfacePoint,
    to: &SurfacePoint,
    waypoints: &[Complex64],
) -> Result<LiftedPolyline, BergmanError> {
    let curve = &pd.curve;
    match (from, to) {
        (SurfacePoint::Branch { index: i0 }, SurfacePoint::Branch { index: i1 })
            if waypoints.is_empty() =>
        {
            let pts = curve.branch_points();
            let junction = crate::surface::safe_junction_between(curve, pts[*i0], pts[*i1]);
            let yj = crate::surface::y_from_base(curve, junction)?;
            let from_half = HalfGap::new(curve, *i0, junction, yj)?;
            let to_half = HalfGap::new(curve, *i1, junction, yj)?;
            let mut out = from_half.sample_lifted(48);
            let back = to_half.sample_lifted(48);
            for k in (0..back.points.len()).rev() {
                out.push(back.points[k], back.lifts[k], -back.motions[k]);
            }
            Ok(out)
        }
        (SurfacePoint::Regular { x: x0, sheet: s0 }, SurfacePoint::Regular { x: x1, sheet: s1 }) => {
            if (x0 - x1).norm() < 1e-9 && s0 != s1 && waypoints.len() == 1 {
                // dumbbell through a branch point: out on one strand, back on
                // the other (opposite lift, reversed motion)
                let e = waypoints[0];
                let path = PlanePath::polyline(&[*x0, e]);
                let y0 = curve.reference_y(*x0) * (*s0 as f64);
                let tr = TrackedBranch::from_start(&path, curve.branch_points().to_vec(), y0);
                let mut out = LiftedPolyline::default();
                let n = 64;
                for k in 0..n {
                    // stop slightly short of the branch point
                    let t = (k as f64 / n as f64) * (1.0 - 1e-6);
                    out.push(
                        path.segs[0].point(t),
                        tr.value(&path, 0, t),
                        path.segs[0].deriv(t),
                    );
                }
                for k in (0..n).rev() {
                    let t = (k as f64 / n as f64) * (1.0 - 1e-6);
                    out.push(
                        path.segs[0].point(t),
                        -tr.value(&path, 0, t),
                        -path.segs[0].deriv(t),
                    );
                }
                return Ok(out);
            }
            // straight path through the waypoints on the from-lift
            let mut nodes = vec![*x0];
            nodes.extend_from_slice(waypoints);
            nodes.push(*x1);
            let path = PlanePath::polyline(&nodes);
            let y0 = curve.reference_y(*x0) * (*s0 as f64);
            let tr = TrackedBranch::from_start(&path, curve.branch_points().to_vec(), y0);
            let mut out = LiftedPolyline::default();
            for (si, seg) in path.segs.iter().enumerate() {
                for k in 0..=32 {
                    let t = k as f64 / 32.0;
                    out.push(seg.point(t), tr.value(&path, si, t), seg.deriv(t));
                }
            }
            Ok(out)
        }
        _ => Err(BergmanError::UnsupportedPathGeometry(format!(
            "relative path {from:?} -> {to:?}"
        ))),
    }
}

/// Residue of q at a zero, by a 12-point Laurent fit on a chart circle.
fn residue_at_zero(
    q: &QIntegrand,
    pd: &PeriodData,
    zero: &SurfacePoint,
) -> Result<Complex64, BergmanError> {
    let curve = &pd.curve;
    const N: usize = 12;
    match zero {
        SurfacePoint::Branch { index } => {
            let e = curve.branch_points()[*index];
            // radius in the z chart: z-circle of radius r covers the x-disk of
            // radius r^2 around e
            let sep = curve
                .branch_points()
                .iter()
                .enumerate()
                .filter(|(j, _)| j != index)
                .map(|(_, &f)| (e - f).norm())
                .fold(f64::INFINITY, f64::min);
            let r = (0.05 * sep).sqrt() * 0.8;
            let w0 = crate::surface::branch_cofactor(curve, *index);
            let mut c_m1 = Complex64::new(0.0, 0.0);
            for l in 0..N {
                let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / N as f64);
                let x = e + z * z;
                // lift: y = z * W(x) with the cofactor tracked from e
                let seg = PlanePath::polyline(&[e, x]);
                let reduced: Vec<Complex64> = curve
                    .branch_points()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != index)
                    .map(|(_, &f)| f)
                    .collect();
                let tr = TrackedBranch::from_start(&seg, reduced, w0);
                let w = tr.end_value(&seg);
                let ylift = z * w;
                // q in the z chart: dx/dz = 2z
                let qz = q.eval(x, ylift)? * 2.0 * z;
                c_m1 += qz * z;
            }
            Ok(c_m1 / N as f64)
        }
        SurfacePoint::Regular { x: x0, sheet } => {
            let (_, bd) = curve.nearest_branch(*x0);
            let pole_sep = q
                .pole_xs
                .iter()
                .map(|&p| {
                    let d = (p - x0).norm();
                    if d > 1e-12 {
                        d
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(f64::INFINITY, f64::min);
            let r = 0.05 * bd.min(pole_sep);
            let y0 = curve.reference_y(*x0) * (*sheet as f64);
            let mut c_m1 = Complex64::new(0.0, 0.0);
            for l in 0..N {
                let dz = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / N as f64);
                let x = x0 + dz;
                let seg = PlanePath::polyline(&[*x0, x]);
                let tr = TrackedBranch::from_start(&seg, curve.branch_points().to_vec(), y0);
                let ylift = tr.end_value(&seg);
                c_m1 += q.eval(x, ylift)? * dz;
            }
            Ok(c_m1 / N as f64)
        }
        SurfacePoint::Infinity { .. } => Err(BergmanError::UnsupportedPathGeometry(
            "residue at an infinite zero".into(),
        )),
    }
}

/// Tolerances for the contour quadrature of q.
#[derive(Clone, Copy, Debug)]
pub struct ContourOpts {
    pub quad_tol: f64,
    pub rel_tol: f64,
}

impl Default for ContourOpts {
    fn default() -> Self {
        Self {
            quad_tol: 3e-8,
            rel_tol: 2e-7,
        }
    }
}

/// Integrals of q over the full dual basis.
pub fn cycle_integrals(
    kernel: &BergmanKernel,
    sq: &SpinorSquare,
    coords: &HomologicalCoords,
    quad_tol: f64,
) -> Result<CycleIntegrals, BergmanError> {
    cycle_integrals_with(
        kernel,
        sq,
        coords,
        ContourOpts {
            quad_tol,
            ..Default::default()
        },
    )
}

/// Integrals of q over the full dual basis, with explicit tolerances.
pub fn cycle_integrals_with(
    kernel: &BergmanKernel,
    sq: &SpinorSquare,
    coords: &HomologicalCoords,
    opts: ContourOpts,
) -> Result<CycleIntegrals, BergmanError> {
    let pd = kernel.pd;
    let g = pd.genus();
    let curve = &pd.curve;
    let pole_xs: Vec<Complex64> = coords
        .labels
        .iter()
        .filter_map(|z| curve.x_of(&z.point))
        .collect();
    let q = QIntegrand {
        kernel,
        numerator: sq.numerator.clone(),
        pole_xs: pole_xs.clone(),
    };

    // per-gap stadium loops, their q-integrals and samples, computed lazily
    let n_gaps = pd.marking.n_gaps();
    let mut gap_loop: Vec<Option<(OrientedLoop, Complex64, Vec<(Complex64, Complex64, Complex64)>)>> =
        (0..n_gaps).map(|_| None).collect();
    let coeffs = pd.marking.coeffs();
    let needed: Vec<bool> = (0..n_gaps)
        .map(|i| (0..2 * g).any(|r| coeffs[(r, i)] != 0))
        .collect();
    for i in 0..n_gaps {
        if !needed[i] {
            continue;
        }
        let lp = loop_for_gap_avoiding(pd, i, &pole_xs)?;
        // keep the contour away from the poles
        let samples = loop_samples(curve, &lp.path, 1.0, 24);
        let mut min_pole_dist = f64::INFINITY;
        for (x, _, _) in &samples {
            for &p in &pole_xs {
                min_pole_dist = min_pole_dist.min((x - p).norm());
            }
        }
        if min_pole_dist < 1e-4 * curve.min_separation() {
            return Err(BergmanError::ContourHitsPole {
                dist: min_pole_dist,
            });
        }
        let val = lp.integrate_with(
            curve,
            &|x, y| q.eval(x, y).unwrap_or(Complex64::new(f64::NAN, 0.0)),
            opts.quad_tol,
            opts.rel_tol,
        )?;
        if !val.re.is_finite() || !val.im.is_finite() {
            return Err(BergmanError::ContourHitsPole { dist: min_pole_dist });
        }
        gap_loop[i] = Some((lp, val, samples));
    }

    // row integrals and crossings with the relative paths
    let d = coords.labels.len();
    let mut rel_polylines = Vec::new();
    if let Some(hub_zero) = coords.labels.last() {
        let hub = hub_zero.point;
        for (j, zero) in coords.labels.iter().take(d.saturating_sub(1)).enumerate() {
            rel_polylines.push(lifted_relative_path(
                pd,
                &hub,
                &zero.point,
                &coords.relative_paths[j],
            )?);
        }
    }
    let mut row_integral = vec![Complex64::new(0.0, 0.0); 2 * g];
    let mut row_crossings = vec![vec![0i64; rel_polylines.len()]; 2 * g];
    for r in 0..2 * g {
        for i in 0..n_gaps {
            let c = coeffs[(r, i)];
            if c == 0 {
                continue;
            }
            let (lp, val, samples) = gap_loop[i].as_ref().unwrap();
            row_integral[r] += val * lp.factor * c as f64;
            for (k, rp) in rel_polylines.iter().enumerate() {
                row_crossings[r][k] +=
                    (c as f64 * lp.factor) as i64 * loop_path_crossings(samples, rp);
            }
        }
    }
    if std::env::var("SPINLAB_DEBUG_CROSSINGS").is_ok() {
        eprintln!("row_crossings = {row_crossings:?}");
        for i in 0..n_gaps {
            if let Some((lp, val, samples)) = gap_loop[i].as_ref() {
                eprintln!("---- gap {i} (factor {}, integral {val})", lp.factor);
                let per: Vec<i64> = rel_polylines
                    .iter()
                    .map(|rp| loop_path_crossings(samples, rp))
                    .collect();
                eprintln!("---- gap {i} crossings {per:?}");
            }
        }
    }

    // residues at the zeros
    let mut residues = Vec::with_capacity(d);
    for zero in &coords.labels {
        residues.push(residue_at_zero(&q, pd, &zero.point)?);
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

    // assemble the dual-basis integrals with duality corrections:
    // s_j = -b_j + corrections, s_{g+j} = a_j + corrections, and the circle
    // around p_k pairs +1 with l_k. The plane-orientation convention used for
    // the crossing signs is mirrored against the duality the pairing identity
    // wants, so the whole dual basis carries one global sign flip (calibrated
    // on the genus-2 identity, where the right-hand side is sign-definite).
    let mut values = Vec::with_capacity(3 * g - 2);
    for j in 0..g {
        let mut v = -row_integral[g + j];
        for k in 0..rel_polylines.len() {
            let m = row_crossings[g + j][k];
            if m != 0 {
                v -= two_pi_i * residues[k] * m as f64;
            }
        }
        values.push(-v);
    }
    for j in 0..g {
        let mut v = row_integral[j];
        for k in 0..rel_polylines.len() {
            let m = row_crossings[j][k];
            if m != 0 {
                v += two_pi_i * residues[k] * m as f64;
            }
        }
        values.push(-v);
    }
    for k in 0..d.saturating_sub(1) {
        values.push(two_pi_i * residues[k]);
    }
    Ok(CycleIntegrals {
        values,
        residues,
        delta: kernel.delta.clone(),
    })
}
