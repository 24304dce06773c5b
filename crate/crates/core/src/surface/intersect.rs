//! Exact intersection bookkeeping for cycles realized as lifted paths.
//!
//! A gap cycle is a branch-to-branch path traversed on one lift and back on
//! the other; two such cycles intersect at shared branch points (one crossing,
//! read off the z-chart tangents) and at transversal plane crossings (each of
//! which counts twice, with the sign set by whether the pinned lifts agree).

use crate::util::{cross_sign, segment_intersection};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Sampled lifted curve: points with their lift value and motion direction.
#[derive(Clone, Debug, Default)]
pub struct LiftedPolyline {
    pub points: Vec<Complex64>,
    pub lifts: Vec<Complex64>,
    pub motions: Vec<Complex64>,
}

impl LiftedPolyline {
    pub fn push(&mut self, x: Complex64, y: Complex64, dxdt: Complex64) {
        self.points.push(x);
        self.lifts.push(y);
        self.motions.push(dxdt);
    }

    pub fn extend_from(&mut self, other: &LiftedPolyline) {
        self.points.extend_from_slice(&other.points);
        self.lifts.extend_from_slice(&other.lifts);
        self.motions.extend_from_slice(&other.motions);
    }

    pub fn reversed_other_count(&self) -> usize {
        self.points.len()
    }
}

/// Sum of transversal crossing contributions between two lifted double-path
/// cycles: each plane crossing contributes 2 * sign(u x v) when the pinned
/// lifts agree there and -2 * sign(u x v) when they disagree.
pub fn transversal_crossings(a: &LiftedPolyline, b: &LiftedPolyline) -> i64 {
    let mut total = 0i64;
    for i in 0..a.points.len().saturating_sub(1) {
        let (a0, a1) = (a.points[i], a.points[i + 1]);
        for j in 0..b.points.len().saturating_sub(1) {
            let (b0, b1) = (b.points[j], b.points[j + 1]);
            // quick reject
            let amin_re = a0.re.min(a1.re);
            let amax_re = a0.re.max(a1.re);
            if b0.re.max(b1.re) < amin_re || b0.re.min(b1.re) > amax_re {
                continue;
            }
            let amin_im = a0.im.min(a1.im);
            let amax_im = a0.im.max(a1.im);
            if b0.im.max(b1.im) < amin_im || b0.im.min(b1.im) > amax_im {
                continue;
            }
            if let Some((s, t)) = segment_intersection(a0, a1, b0, b1) {
                let ya = a.lifts[i] * (1.0 - s) + a.lifts[i + 1] * s;
                let yb = b.lifts[j] * (1.0 - t) + b.lifts[j + 1] * t;
                let same = (ya - yb).norm() <= (ya + yb).norm();
                let u = a.motions[i];
                let v = b.motions[j];
                let orient = cross_sign(u, v).signum() as i64;
                total += if same { 2 * orient } else { -2 * orient };
            }
        }
    }
    total
}

/// Integer symplectic basis for a skew form of rank 2g on Z^n, as rows of a
/// (2g x n) matrix ordered (a_1..a_g, b_1..b_g). The reduction starts from the
/// seed rows so that a seed which is already symplectic is returned unchanged.
pub fn symplectic_basis(gram: &DMatrix<i64>, seed: &DMatrix<i64>, genus: usize) -> Option<DMatrix<i64>> {
    let n = gram.nrows();
    let pairing = |u: &Vec<i64>, v: &Vec<i64>| -> i64 {
        let mut s = 0i64;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += u[i] * gram[(i, j)] * v[j];
            }
        }
        s
    };
    // generators: seed rows then unit vectors (to guarantee full span)
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for r in 0..seed.nrows() {
        gens.push((0..n).map(|c| seed[(r, c)]).collect());
    }
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        gens.push(e);
    }
    let mut a_rows: Vec<Vec<i64>> = Vec::new();
    let mut b_rows: Vec<Vec<i64>> = Vec::new();
    for _ in 0..genus {
        // find the pair with the smallest nonzero pairing
        let mut best: Option<(usize, usize, i64)> = None;
        for p in 0..gens.len() {
            for q in 0..gens.len() {
                let d = pairing(&gens[p], &gens[q]);
                if d > 0 && best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((p, q, d));
                }
            }
        }
        let (mut pi, mut qi, mut d) = best?;
        // Euclidean reduction until d divides every pairing with u
        loop {
            let u = gens[pi].clone();
            let mut improved = false;
            for (w_idx, w) in gens.iter().enumerate() {
                if w_idx == pi || w_idx == qi {
                    continue;
                }
                let a = pairing(&u, w);
                if a.rem_euclid(d) != 0 {
                    // replace v by w - k*v so the new pairing is the remainder
                    let k = a.div_euclid(d);
                    let v_old = gens[qi].clone();
                    let mut v_new = w.clone();
                    for c in 0..n {
                        v_new[c] -= k * v_old[c];
                    }
                    let nd = pairing(&u, &v_new);
                    debug_assert!(nd > 0 && nd < d);
                    gens[qi] = v_new;
                    d = nd;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
        if d != 1 {
            // the induced form on homology is unimodular, so this means the
            // sampling missed a crossing
            return None;
        }
        let u = gens[pi].clone();
        let v = gens[qi].clone();
        // project the symplectic complement out of the remaining generators
        if pi > qi {
            std::mem::swap(&mut pi, &mut qi);
        }
        gens.remove(qi);
        gens.remove(pi);
        for w in gens.iter_mut() {
            let bu = pairing(&u, w);
            let bv = pairing(&v, w);
            for c in 0..n {
                // w -> w - bu * v ... with signs so both pairings vanish
                w[c] = w[c] - bu * v[c] + bv * u[c];
            }
        }
        a_rows.push(u);
        b_rows.push(v);
    }
    let mut out = DMatrix::zeros(2 * genus, n);
    for (r, row) in a_rows.iter().chain(b_rows.iter()).enumerate() {
        for c in 0..n {
            out[(r, c)] = row[c];
        }
    }
    Some(out)
}
