//! Polynomial root location by the argument principle on boxes, with winding
//! counts for multiplicities and cluster detection.

use crate::util::{poly_deriv, poly_eval};
use num_complex::Complex64;

/// Located root group: center, total winding multiplicity, and whether the
/// group is an unresolved cluster (several distinct roots within the cluster
/// radius) rather than a single root of that multiplicity.
#[derive(Clone, Debug)]
pub struct RootGroup {
    pub center: Complex64,
    pub multiplicity: usize,
    pub cluster: bool,
}

/// Winding number of p along the rectangle boundary, by adaptive argument
/// tracking. Returns None if the boundary comes too close to a zero.
fn winding_number(p: &[Complex64], lo: Complex64, hi: Complex64, floor_scale: f64) -> Option<i64> {
    let corners = [
        lo,
        Complex64::new(hi.re, lo.im),
        hi,
        Complex64::new(lo.re, hi.im),
        lo,
    ];
    let mut total = 0.0_f64;
    for w in corners.windows(2) {
        total += edge_arg_change(p, w[0], w[1], floor_scale, 0)?;
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.1 {
        return None;
    }
    Some(rounded as i64)
}

/// Noise level of evaluating p at x: below this, winding data is garbage.
fn noise_floor(p: &[Complex64], x: Complex64, floor_scale: f64) -> f64 {
    let ax = x.norm();
    let mut acc = 0.0;
    let mut pw = 1.0;
    for c in p {
        acc += c.norm() * pw;
        pw *= ax;
    }
    floor_scale * acc
}

fn edge_arg_change(
    p: &[Complex64],
    a: Complex64,
    b: Complex64,
    floor_scale: f64,
    depth: usize,
) -> Option<f64> {
    let va = poly_eval(p, a);
    let vb = poly_eval(p, b);
    if va.norm() < noise_floor(p, a, floor_scale) || vb.norm() < noise_floor(p, b, floor_scale) {
        return None;
    }
    let m = 0.5 * (a + b);
    let vm = poly_eval(p, m);
    if vm.norm() < noise_floor(p, m, floor_scale) {
        return None;
    }
    // accept only when the value ratio stays close to 1 through the midpoint;
    // an even-order zero near the segment can alias a full turn between
    // ratio-close endpoints, but its value dip at the midpoint gives it away
    let r1 = vm / va;
    let r2 = vb / vm;
    if (r1 - 1.0).norm() < 0.5 && (r2 - 1.0).norm() < 0.5 {
        return Some(r1.arg() + r2.arg());
    }
    if depth > 52 {
        return None;
    }
    Some(edge_arg_change(p, a, m, floor_scale, depth + 1)? + edge_arg_change(p, m, b, floor_scale, depth + 1)?)
}

/// Recursive subdivision into disjoint children; the split line is nudged when
/// a zero sits on it, so every box is counted exactly once.
fn subdivide(
    p: &[Complex64],
    lo: Complex64,
    hi: Complex64,
    w: i64,
    resolve: f64,
    floor_scale: f64,
    out: &mut Vec<(Complex64, i64)>,
) {
    if w == 0 {
        return;
    }
    let size = (hi - lo).norm();
    if size < resolve {
        out.push((0.5 * (lo + hi), w));
        return;
    }
    for attempt in 0..24 {
        let off = 0.017 * ((attempt + 1) / 2) as f64 * if attempt % 2 == 0 { 1.0 } else { -1.0 };
        let f = 0.5 + off;
        let mid = Complex64::new(
            lo.re + (hi.re - lo.re) * f,
            lo.im + (hi.im - lo.im) * (1.0 - f * 0.98),
        );
        let children = [
            (lo, mid),
            (Complex64::new(mid.re, lo.im), Complex64::new(hi.re, mid.im)),
            (Complex64::new(lo.re, mid.im), Complex64::new(mid.re, hi.im)),
            (mid, hi),
        ];
        let ws: Vec<Option<i64>> = children
            .iter()
            .map(|(l, h)| winding_number(p, *l, *h, floor_scale))
            .collect();
        if ws.iter().all(|x| x.is_some()) {
            let total: i64 = ws.iter().map(|x| x.unwrap()).sum();
            if total == w {
                for ((l, h), cw) in children.iter().zip(ws) {
                    subdivide(p, *l, *h, cw.unwrap(), resolve, floor_scale, out);
                }
                return;
            }
        }
    }
    // could not split further: below the floor the roots are numerically
    // inseparable, so report the box as one unresolved group
    if size < 16.0 * resolve {
        out.push((0.5 * (lo + hi), w));
        return;
    }
    panic!("argument-principle subdivision failed; zero pinned to every split line");
}

/// All roots of p inside its Cauchy bound, grouped at `cluster_radius`.
pub fn polynomial_roots(p: &[Complex64], cluster_radius: f64) -> Vec<RootGroup> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let mut coeffs = p.to_vec();
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() < 1e-13 * scale {
        coeffs.pop();
    }
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg].norm();
    let bound = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0_f64, f64::max);
    let floor = 2e-14;
    let resolve = (cluster_radius * 0.25).max(1e-12 * bound);
    let mut found: Vec<(Complex64, i64)> = Vec::new();
    let mut margin = 0.1234;
    loop {
        let lo = Complex64::new(-bound - margin, -bound - margin * 0.71);
        let hi = Complex64::new(bound + margin * 1.13, bound + margin * 0.89);
        if let Some(w) = winding_number(&coeffs, lo, hi, floor) {
            assert_eq!(w as usize, deg, "outer box must contain all roots");
            subdivide(&coeffs, lo, hi, w, resolve, floor, &mut found);
            break;
        }
        margin *= 1.618;
        assert!(margin < 1e3 * bound, "could not frame the root set");
    }

    let mut derivs = vec![coeffs.clone()];
    for _ in 0..deg {
        let next = poly_deriv(derivs.last().unwrap());
        derivs.push(next);
    }
    // polish each box finding as an m-fold point via the (m-1)-th derivative
    let polish = |c0: Complex64, m: usize| -> Complex64 {
        let dm = &derivs[m - 1];
        let dm1 = poly_deriv(dm);
        let mut x = c0;
        for _ in 0..60 {
            let f = poly_eval(dm, x);
            let fp = poly_eval(&dm1, x);
            if fp.norm() < 1e-300 {
                break;
            }
            let step = f / fp;
            x -= step;
            if step.norm() < 1e-15 * (1.0 + x.norm()) {
                break;
            }
        }
        x
    };
    let mut polished: Vec<(Complex64, i64)> = found
        .into_iter()
        .map(|(c, m)| (polish(c, m.max(1) as usize), m))
        .collect();
    polished.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    // merge polished roots within the cluster radius
    let mut groups: Vec<(Complex64, i64)> = Vec::new();
    for (c, m) in polished {
        if let Some(last) = groups.last_mut() {
            if (last.0 - c).norm() < cluster_radius {
                last.0 = (last.0 * last.1 as f64 + c * m as f64) / (last.1 + m) as f64;
                last.1 += m;
                continue;
            }
        }
        groups.push((c, m));
    }
    groups
        .into_iter()
        .map(|(c0, mm)| {
            let m = mm.max(1) as usize;
            let x = polish(c0, m);
            // spread of the group: |p(x*)| ~ delta^m |p^(m)(x*)| / m! for a
            // cluster of roots at distance delta around x*
            let cluster = if m >= 2 {
                let pm = poly_eval(&derivs[m], x).norm();
                let fact: f64 = (1..=m).map(|k| k as f64).product();
                let delta = if pm > 1e-300 {
                    (poly_eval(&coeffs, x).norm() * fact / pm).powf(1.0 / m as f64)
                } else {
                    0.0
                };
                delta > 1e-7 * (1.0 + x.norm())
            } else {
                false
            };
            RootGroup {
                center: x,
                multiplicity: m,
                cluster,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::poly_from_roots;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_roots() {
        let p = poly_from_roots(&[cx(1.0, 0.5), cx(-0.7, 0.2), cx(0.1, -1.3)]);
        let roots = polynomial_roots(&p, 1e-4);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert_eq!(r.multiplicity, 1);
            assert!(!r.cluster);
            assert!(poly_eval(&p, r.center).norm() < 1e-10);
        }
    }

    #[test]
    fn double_root_detected_with_multiplicity() {
        let p = poly_from_roots(&[cx(0.4, -0.3), cx(0.4, -0.3), cx(-1.0, 0.0)]);
        let roots = polynomial_roots(&p, 1e-4);
        let double = roots.iter().find(|r| r.multiplicity == 2).unwrap();
        assert!(!double.cluster, "exact double root is not a cluster");
        assert!((double.center - cx(0.4, -0.3)).norm() < 1e-7);
    }

    #[test]
    fn near_double_reported_as_cluster() {
        let p = poly_from_roots(&[cx(0.4, 0.0), cx(0.4 + 3e-5, 0.0)]);
        let roots = polynomial_roots(&p, 1e-4);
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert_eq!(roots[0].multiplicity, 2);
        assert!(roots[0].cluster, "distinct nearby roots flag a cluster");
    }

    #[test]
    fn well_separated_pair_not_merged() {
        let p = poly_from_roots(&[cx(0.0, 0.0), cx(1.0, 0.0)]);
        let roots = polynomial_roots(&p, 1e-4);
        assert_eq!(roots.len(), 2);
    }
}
