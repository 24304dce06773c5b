//! Homology markings as integer combinations of the oriented gap cycles.

use super::path::{stadium_loop, PlanePath};
use super::periods::{loop_integral, PeriodData};
use super::{HyperellipticCurve, SurfaceError};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Symplectic basis (a_1..a_g, b_1..b_g) written over the oriented gap cycles.
///
/// Row r of `coeffs` holds the integer coefficients of cycle r (a-cycles
/// first). Gap cycle i is the double path between consecutive branch points
/// e_{i+1}, e_{i+2} in the marking order, oriented so consecutive gap cycles
/// intersect +1; their Gram matrix is then the tridiagonal with +1 above the
/// diagonal, which makes the symplectic property an exact integer check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyMarking {
    coeffs: DMatrix<i64>,
    genus: usize,
}

impl HomologyMarking {
    /// Conventional hyperelliptic chain basis: a_j around the cut
    /// (e_{2j-1}, e_{2j}), b_j threading the cuts from j outward.
    pub fn standard(curve: &HyperellipticCurve) -> Self {
        let g = curve.genus();
        let n_gaps = curve.branch_points().len() - 1;
        let mut coeffs = DMatrix::zeros(2 * g, n_gaps);
        for j in 0..g {
            coeffs[(j, 2 * j)] = 1;
            for k in j..g {
                coeffs[(j + g, 2 * k + 1)] = 1;
            }
        }
        Self { coeffs, genus: g }
    }

    /// Custom basis; rejected unless exactly symplectic.
    pub fn custom(curve: &HyperellipticCurve, coeffs: DMatrix<i64>) -> Result<Self, SurfaceError> {
        let g = curve.genus();
        let n_gaps = curve.branch_points().len() - 1;
        if coeffs.nrows() != 2 * g || coeffs.ncols() != n_gaps {
            return Err(SurfaceError::MarkingNotSymplectic);
        }
        let m = Self { coeffs, genus: g };
        if !m.is_symplectic() {
            return Err(SurfaceError::MarkingNotSymplectic);
        }
        Ok(m)
    }

    pub fn coeffs(&self) -> &DMatrix<i64> {
        &self.coeffs
    }

    /// Internal constructor for bases already validated against the actual
    /// intersection geometry.
    pub(crate) fn from_coeffs_unchecked(coeffs: DMatrix<i64>, genus: usize) -> Self {
        Self { coeffs, genus }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn n_gaps(&self) -> usize {
        self.coeffs.ncols()
    }

    /// Gram matrix of the oriented gap cycles.
    pub fn gap_gram(n_gaps: usize) -> DMatrix<i64> {
        let mut gram = DMatrix::zeros(n_gaps, n_gaps);
        for i in 0..n_gaps - 1 {
            gram[(i, i + 1)] = 1;
            gram[(i + 1, i)] = -1;
        }
        gram
    }

    /// Intersection matrix of the marking cycles, exactly.
    pub fn intersection_matrix(&self) -> DMatrix<i64> {
        let gram = Self::gap_gram(self.n_gaps());
        &self.coeffs * gram * self.coeffs.transpose()
    }

    pub fn is_symplectic(&self) -> bool {
        let g = self.genus;
        let inter = self.intersection_matrix();
        let mut j = DMatrix::<i64>::zeros(2 * g, 2 * g);
        for i in 0..g {
            j[(i, i + g)] = 1;
            j[(i + g, i)] = -1;
        }
        inter == j
    }

    /// Apply an integer symplectic map: rows' = sigma * rows.
    pub fn transformed(&self, sigma: &crate::theta::SymplecticMap) -> Self {
        let full = sigma.full_matrix();
        Self {
            coeffs: full * &self.coeffs,
            genus: self.genus,
        }
    }
}

/// Closed planar loop homologous to an oriented gap cycle, with the factor
/// matching the lift and orientation. Integrals of 1-forms over the cycle are
/// `factor` times the integral over the drawn loop on the +reference lift.
pub struct OrientedLoop {
    pub path: PlanePath,
    pub factor: f64,
}

impl OrientedLoop {
    pub fn integrate(
        &self,
        curve: &HyperellipticCurve,
        f: &dyn Fn(Complex64, Complex64) -> Complex64,
        tol: f64,
    ) -> Result<Complex64, SurfaceError> {
        Ok(loop_integral(curve, &self.path, 1.0, f, tol)? * self.factor)
    }

    pub fn integrate_with(
        &self,
        curve: &HyperellipticCurve,
        f: &dyn Fn(Complex64, Complex64) -> Complex64,
        tol: f64,
        rel_tol: f64,
    ) -> Result<Complex64, SurfaceError> {
        Ok(
            crate::surface::periods::loop_integral_with(curve, &self.path, 1.0, f, tol, rel_tol)?
                * self.factor,
        )
    }
}

/// Stadium-loop representative of the oriented gap cycle `i`, calibrated
/// against the gap periods of the holomorphic differentials.
pub fn loop_for_gap(pd: &PeriodData, i: usize) -> Result<OrientedLoop, SurfaceError> {
    loop_for_gap_avoiding(pd, i, &[])
}

/// Same, keeping the loop clear of the given extra points (poles of the
/// integrand it will carry).
pub fn loop_for_gap_avoiding(
    pd: &PeriodData,
    i: usize,
    avoid: &[Complex64],
) -> Result<OrientedLoop, SurfaceError> {
    let curve = &pd.curve;
    let pts = curve.branch_points();
    let (p, q) = (pts[i], pts[i + 1]);
    // clearance: stay away from the other branch points and listed poles
    let mut clearance = 0.45 * (q - p).norm();
    for (j, &e) in pts.iter().enumerate() {
        if j == i || j == i + 1 {
            continue;
        }
        let d = dist_to_segment(e, p, q);
        clearance = clearance.min(0.45 * d);
    }
    for &z in avoid {
        let d = dist_to_segment(z, p, q);
        if d > 1e-9 {
            clearance = clearance.min(0.6 * d);
        }
    }
    let path = stadium_loop(p, q, clearance);
    // calibrate the lift/orientation factor against the oriented gap periods
    let g = curve.genus();
    let mut loop_vals = Vec::with_capacity(g);
    for k in 0..g {
        let f = |x: Complex64, y: Complex64| {
            let mut pw = Complex64::new(1.0, 0.0);
            for _ in 0..k {
                pw *= x;
            }
            pw / y
        };
        loop_vals.push(loop_integral(curve, &path, 1.0, &f, pd.quad_tol)?);
    }
    let mut d_plus = 0.0;
    let mut d_minus = 0.0;
    let mut scale = 0.0_f64;
    for k in 0..g {
        let gp = pd.gaps.periods[(i, k)];
        d_plus += (loop_vals[k] - gp).norm_sqr();
        d_minus += (loop_vals[k] + gp).norm_sqr();
        scale = scale.max(gp.norm());
    }
    let factor = if d_plus <= d_minus { 1.0 } else { -1.0 };
    let resid = d_plus.min(d_minus).sqrt();
    assert!(
        resid < 1e-5 * scale.max(1e-6),
        "loop representative does not match gap cycle {i}: residual {resid:e} vs scale {scale:e}"
    );
    Ok(OrientedLoop { path, factor })
}

fn dist_to_segment(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    let t = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}
