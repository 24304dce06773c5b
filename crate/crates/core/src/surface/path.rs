//! Paths in the x-plane: straight polylines with automatic semicircular
//! detours around branch points, and closed stadium loops around cuts.

use super::{HyperellipticCurve, SurfaceError};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub enum PathSeg {
    Line {
        from: Complex64,
        to: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        a0: f64,
        a1: f64,
    },
}

impl PathSeg {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            PathSeg::Line { from, to } => from + (to - from) * t,
            PathSeg::Arc {
                center,
                radius,
                a0,
                a1,
            } => center + Complex64::from_polar(radius, a0 + (a1 - a0) * t),
        }
    }

    /// dx/dt
    pub fn deriv(&self, t: f64) -> Complex64 {
        match *self {
            PathSeg::Line { from, to } => to - from,
            PathSeg::Arc {
                center: _,
                radius,
                a0,
                a1,
            } => {
                let phi = a0 + (a1 - a0) * t;
                Complex64::from_polar(radius, phi) * Complex64::new(0.0, a1 - a0)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathSeg::Line { from, to } => (to - from).norm(),
            PathSeg::Arc { radius, a0, a1, .. } => radius * (a1 - a0).abs(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlanePath {
    pub segs: Vec<PathSeg>,
}

impl PlanePath {
    pub fn polyline(points: &[Complex64]) -> Self {
        let segs = points
            .windows(2)
            .map(|w| PathSeg::Line {
                from: w[0],
                to: w[1],
            })
            .collect();
        Self { segs }
    }

    pub fn start(&self) -> Complex64 {
        self.segs.first().unwrap().start()
    }

    pub fn end(&self) -> Complex64 {
        self.segs.last().unwrap().end()
    }

    pub fn length(&self) -> f64 {
        self.segs.iter().map(|s| s.length()).sum()
    }

    /// Point at a global arclength fraction (used only for coarse sampling).
    pub fn point_at(&self, s: f64) -> Complex64 {
        let total = self.length();
        let mut target = s.clamp(0.0, 1.0) * total;
        for seg in &self.segs {
            let l = seg.length();
            if target <= l || std::ptr::eq(seg, self.segs.last().unwrap()) {
                return seg.point((target / l).clamp(0.0, 1.0));
            }
            target -= l;
        }
        self.end()
    }

    pub fn reversed(&self) -> Self {
        let segs = self
            .segs
            .iter()
            .rev()
            .map(|s| match *s {
                PathSeg::Line { from, to } => PathSeg::Line { from: to, to: from },
                PathSeg::Arc {
                    center,
                    radius,
                    a0,
                    a1,
                } => PathSeg::Arc {
                    center,
                    radius,
                    a0: a1,
                    a1: a0,
                },
            })
            .collect();
        Self { segs }
    }

    /// Concatenate with another path starting where this one ends.
    pub fn join(mut self, other: PlanePath) -> Self {
        self.segs.extend(other.segs);
        self
    }

    /// Split into (first segment, the rest), for endpoint substitutions.
    pub fn split_first(&self) -> (PathSeg, PlanePath) {
        (
            self.segs[0],
            PlanePath {
                segs: self.segs[1..].to_vec(),
            },
        )
    }

    /// Fine polyline discretization (for crossing detection against other paths).
    pub fn discretize(&self, pts_per_seg: usize) -> Vec<Complex64> {
        let mut out = vec![self.start()];
        for seg in &self.segs {
            let n = match seg {
                PathSeg::Line { .. } => pts_per_seg.max(1),
                PathSeg::Arc { .. } => (4 * pts_per_seg).max(16),
            };
            for k in 1..=n {
                out.push(seg.point(k as f64 / n as f64));
            }
        }
        out
    }
}

/// Straight path from `from` to `to` with semicircular detours (on the left of
/// the travel direction) around every branch point that comes too close.
///
/// Branch points within `skip_near_endpoints` of an endpoint are treated as
/// that endpoint (no detour); any other branch point whose detour disk
/// swallows an endpoint is an error.
pub fn straight_with_detours(
    curve: &HyperellipticCurve,
    from: Complex64,
    to: Complex64,
    endpoint_exempt: &[usize],
) -> Result<PlanePath, SurfaceError> {
    let d = to - from;
    let len = d.norm();
    assert!(len > 0.0, "degenerate path");
    let dir = d / len;

    // collect detour candidates along the segment
    let mut detours: Vec<(f64, usize, f64)> = Vec::new(); // (projection param, branch idx, radius)
    for (i, &e) in curve.branch_points().iter().enumerate() {
        if endpoint_exempt.contains(&i) {
            continue;
        }
        let d_from = (from - e).norm();
        let d_to = (to - e).norm();
        if d_from < curve.separation_threshold() || d_to < curve.separation_threshold() {
            return Err(SurfaceError::PathThroughBranchPoint { index: i });
        }
        // shrink the detour if an endpoint sits close to this branch point
        let r = curve
            .detour_radius(i)
            .min(0.45 * d_from)
            .min(0.45 * d_to);
        let w = e - from;
        let t = (w * dir.conj()).re / len; // projection parameter in [0,1]
        let perp = (w - dir * (t * len)).norm();
        if perp < r && t > -r / len && t < 1.0 + r / len {
            // chord of the circle |x - e| = r along the segment
            let half = (r * r - perp * perp).sqrt();
            let t1 = t - half / len;
            let t2 = t + half / len;
            if t1 <= 0.0 || t2 >= 1.0 {
                return Err(SurfaceError::PathThroughBranchPoint { index: i });
            }
            detours.push((t, i, r));
        }
    }
    detours.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut segs = Vec::new();
    let mut cursor = from;
    for (t, i, r) in detours {
        let e = curve.branch_points()[i];
        let w = e - from;
        let proj = (w * dir.conj()).re;
        let perp_v = w - dir * proj;
        let half = (r * r - perp_v.norm_sqr()).sqrt();
        let p_in = from + dir * (proj - half);
        let p_out = from + dir * (proj + half);
        let _ = t;
        if (p_in - cursor).norm() > 1e-15 * len {
            segs.push(PathSeg::Line {
                from: cursor,
                to: p_in,
            });
        }
        // arc from p_in to p_out, on the left of the canonical direction of the
        // unordered endpoint pair, so a reversed path uses the same geometric arc
        let a_in = (p_in - e).arg();
        let a_out = (p_out - e).arg();
        let canonical_dir = if (from.re, from.im) <= (to.re, to.im) {
            dir
        } else {
            -dir
        };
        let left = Complex64::new(0.0, 1.0) * canonical_dir;
        let mut a1_ccw = a_out;
        while a1_ccw < a_in {
            a1_ccw += 2.0 * std::f64::consts::PI;
        }
        let mid_ccw = e + Complex64::from_polar(r, 0.5 * (a_in + a1_ccw));
        let use_ccw = ((mid_ccw - e) * left.conj()).re > 0.0;
        let a1 = if use_ccw {
            a1_ccw
        } else {
            let mut a = a_out;
            while a > a_in {
                a -= 2.0 * std::f64::consts::PI;
            }
            a
        };
        segs.push(PathSeg::Arc {
            center: e,
            radius: r,
            a0: a_in,
            a1,
        });
        cursor = p_out;
    }
    if (to - cursor).norm() > 1e-15 * len || segs.is_empty() {
        segs.push(PathSeg::Line { from: cursor, to });
    }
    Ok(PlanePath { segs })
}

/// Closed counterclockwise stadium loop around the segment between two branch
/// points, at the given clearance radius.
pub fn stadium_loop(p: Complex64, q: Complex64, r: f64) -> PlanePath {
    let d = q - p;
    let dir = d / d.norm();
    let n = Complex64::new(0.0, 1.0) * dir; // left normal
    let a = q + n * r;
    let b = p + n * r;
    let c = p - n * r;
    let e = q - n * r;
    let ang_n = n.arg();
    let mut segs = Vec::new();
    // counterclockwise: top side from q-side to p-side, cap around p, bottom, cap around q
    segs.push(PathSeg::Line { from: a, to: b });
    segs.push(PathSeg::Arc {
        center: p,
        radius: r,
        a0: ang_n,
        a1: ang_n + std::f64::consts::PI,
    });
    segs.push(PathSeg::Line { from: c, to: e });
    segs.push(PathSeg::Arc {
        center: q,
        radius: r,
        a0: ang_n - std::f64::consts::PI,
        a1: ang_n,
    });
    PlanePath { segs }
}

/// Circle of radius r around a point, counterclockwise.
pub fn circle_loop(center: Complex64, r: f64) -> PlanePath {
    PlanePath {
        segs: vec![PathSeg::Arc {
            center,
            radius: r,
            a0: 0.0,
            a1: 2.0 * std::f64::consts::PI,
        }],
    }
}
