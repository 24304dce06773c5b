//! Sheet tracking along paths in the x-plane.
//!
//! The reference branch of y is a product of square roots whose cuts are rays
//! rotated by a small fixed angle off the negative real direction, so that
//! integration paths along the real axis never run along a cut. Analytic
//! continuation along a path is then a matter of counting exact ray crossings:
//! each crossing flips the sign of one factor.

use super::path::{PathSeg, PlanePath};
use num_complex::Complex64;

/// Small rotation of every branch cut off the horizontal.
pub const CUT_ROTATION: f64 = 1e-6;

/// Square root with the branch cut along the ray arg(w) = pi + CUT_ROTATION.
#[inline]
pub fn rotated_sqrt(w: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, CUT_ROTATION);
    (w * rot.conj()).sqrt() * Complex64::from_polar(1.0, CUT_ROTATION / 2.0)
}

/// Cut direction: the ray from each root along which its sqrt factor jumps.
#[inline]
fn cut_direction() -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI + CUT_ROTATION)
}

/// Crossing parameters (in (0,1)) of a line segment with the cut ray from `root`.
fn line_ray_crossings(z0: Complex64, z1: Complex64, root: Complex64, out: &mut Vec<f64>) {
    let u = cut_direction();
    let a = (z0 - root) / u;
    let b = (z1 - z0) / u;
    if b.im.abs() < 1e-300 {
        return;
    }
    let t = -a.im / b.im;
    if t <= 0.0 || t >= 1.0 {
        return;
    }
    let rho = a.re + t * b.re;
    if rho > 0.0 {
        out.push(t);
    }
}

/// Crossing parameters of a circular arc with the cut ray from `root`.
fn arc_ray_crossings(
    center: Complex64,
    radius: f64,
    a0: f64,
    a1: f64,
    root: Complex64,
    out: &mut Vec<f64>,
) {
    let u = cut_direction();
    let beta = u.arg();
    let a = ((center - root) / u).im;
    let s = -a / radius;
    if s.abs() > 1.0 {
        return;
    }
    let base = s.asin();
    // sin(phi - beta) = s has solutions phi = beta + base and beta + pi - base
    for phi0 in [beta + base, beta + std::f64::consts::PI - base] {
        // bring phi0 into the arc's parameter range
        let lo = a0.min(a1);
        let hi = a0.max(a1);
        let mut phi = phi0;
        while phi > lo + 2.0 * std::f64::consts::PI {
            phi -= 2.0 * std::f64::consts::PI;
        }
        while phi < lo {
            phi += 2.0 * std::f64::consts::PI;
        }
        while phi <= hi + 1e-15 {
            let x = center + Complex64::from_polar(radius, phi);
            let rho = ((x - root) / u).re;
            let t = (phi - a0) / (a1 - a0);
            if rho > 0.0 && t > 1e-13 && t < 1.0 - 1e-13 {
                out.push(t);
            }
            phi += 2.0 * std::f64::consts::PI;
        }
    }
}

/// Analytic branch of sqrt(prod_i (x - roots[i])) along a plane path.
///
/// The branch is pinned by a value hint at the start or end of the path and
/// evaluated anywhere on the path by exact cut-crossing parity.
pub struct TrackedBranch {
    pub roots: Vec<Complex64>,
    /// sign at the start of the path relative to the reference product
    s0: f64,
    /// per segment, sorted crossing parameters
    seg_flips: Vec<Vec<f64>>,
    /// parity of crossings strictly before each segment
    seg_prefix: Vec<u32>,
}

impl TrackedBranch {
    fn flips_for(path: &PlanePath, roots: &[Complex64]) -> (Vec<Vec<f64>>, Vec<u32>) {
        let mut seg_flips = Vec::with_capacity(path.segs.len());
        for seg in &path.segs {
            let mut flips = Vec::new();
            for &r in roots {
                match *seg {
                    PathSeg::Line { from, to } => line_ray_crossings(from, to, r, &mut flips),
                    PathSeg::Arc {
                        center,
                        radius,
                        a0,
                        a1,
                    } => arc_ray_crossings(center, radius, a0, a1, r, &mut flips),
                }
            }
            flips.sort_by(|a, b| a.partial_cmp(b).unwrap());
            seg_flips.push(flips);
        }
        let mut seg_prefix = Vec::with_capacity(seg_flips.len());
        let mut acc = 0u32;
        for f in &seg_flips {
            seg_prefix.push(acc);
            acc += f.len() as u32;
        }
        (seg_flips, seg_prefix)
    }

    fn reference(&self, x: Complex64) -> Complex64 {
        self.roots.iter().map(|&e| rotated_sqrt(x - e)).product()
    }

    /// Pin the branch by its value at the start of the path.
    pub fn from_start(path: &PlanePath, roots: Vec<Complex64>, start_value: Complex64) -> Self {
        let (seg_flips, seg_prefix) = Self::flips_for(path, &roots);
        let mut t = Self {
            roots,
            s0: 1.0,
            seg_flips,
            seg_prefix,
        };
        let reference = t.reference(path.start());
        t.s0 = if (start_value - reference).norm() <= (start_value + reference).norm() {
            1.0
        } else {
            -1.0
        };
        t
    }

    /// Pin the branch by its value at the end of the path.
    pub fn from_end(path: &PlanePath, roots: Vec<Complex64>, end_value: Complex64) -> Self {
        let (seg_flips, seg_prefix) = Self::flips_for(path, &roots);
        let total: u32 = seg_flips.iter().map(|f| f.len() as u32).sum();
        let mut t = Self {
            roots,
            s0: 1.0,
            seg_flips,
            seg_prefix,
        };
        let ref_end = t.reference(path.end());
        let s_end = if (end_value - ref_end).norm() <= (end_value + ref_end).norm() {
            1.0
        } else {
            -1.0
        };
        t.s0 = s_end * if total % 2 == 0 { 1.0 } else { -1.0 };
        t
    }

    /// Branch value at parameter tau of segment `seg` of the path.
    pub fn value(&self, path: &PlanePath, seg: usize, tau: f64) -> Complex64 {
        let x = path.segs[seg].point(tau);
        let before =
            self.seg_prefix[seg] + self.seg_flips[seg].iter().filter(|&&f| f < tau).count() as u32;
        let sign = if before % 2 == 0 { self.s0 } else { -self.s0 };
        self.reference(x) * sign
    }

    pub fn end_value(&self, path: &PlanePath) -> Complex64 {
        let last = path.segs.len() - 1;
        let total = self.seg_prefix[last] + self.seg_flips[last].len() as u32;
        let sign = if total % 2 == 0 { self.s0 } else { -self.s0 };
        self.reference(path.end()) * sign
    }

    pub fn start_sign(&self) -> f64 {
        self.s0
    }
}
