//! Degenerating families realized by branch-point collision and clustering.

use super::DegenError;
use crate::surface::{period_matrix, HomologyMarking, HyperellipticCurve, PeriodData};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// Two branch points collide: e0 +- sqrt(t). The vanishing cycle is the
    /// a-cycle around the pair; the plumbing parameter is t itself.
    Irreducible,
    /// A cluster of 2j+1 branch points scaled by s around the origin; the
    /// plumbing parameter calibrates to sqrt(s).
    Reducible { j: usize },
    /// Irreducible collision tuned so the colliding pair carries the double
    /// zeros of a designated odd spinor (the merging-zeros family).
    ZgCollision,
}

/// One grid point of a family, with the marked curve data.
pub struct FamilyPoint {
    pub param: f64,
    /// calibrated plumbing parameter
    pub plumbing: f64,
    pub pd: PeriodData,
}

pub struct DegenerationFamily {
    pub kind: FamilyKind,
    pub points: Vec<FamilyPoint>,
    /// genus of the degenerating curves
    pub genus: usize,
    /// limit-component data for comparison checks
    pub limit: LimitData,
}

/// Components of the nodal limit with markings matching the family marking.
pub struct LimitData {
    /// irreducible: the normalized genus g-1 curve; reducible: the outer
    /// component containing the node as a branch point
    pub outer: Option<PeriodData>,
    /// reducible only: the inner (cluster) component
    pub inner: Option<PeriodData>,
    /// index of the node branch point on the outer component (reducible)
    pub outer_node_index: Option<usize>,
}

/// Family of curves y^2 = ((x - e0)^2 - t) * prod (x - w_l) approaching an
/// irreducible one-nodal curve. The outer points must leave the collision
/// slot at the marking position of the last handle, i.e. exactly 2g - 2 of
/// them sort below e0.
pub fn irreducible_family(
    outer: Vec<Complex64>,
    e0: Complex64,
    grid: Vec<f64>,
    quad_tol: f64,
) -> Result<DegenerationFamily, DegenError> {
    assert!(outer.len() % 2 == 0, "outer point count must be even");
    let g = outer.len() / 2;
    // transversality of the construction: collision pair clear of the rest
    for (idx, &w) in outer.iter().enumerate() {
        let t0 = grid[0];
        if (w - e0).norm() < 3.0 * t0.sqrt() {
            return Err(DegenError::CollisionHitsOtherBranchPoint { t: t0, index: idx });
        }
    }
    let mut points = Vec::with_capacity(grid.len());
    for &t in &grid {
        let mut pts = outer.clone();
        pts.push(e0 - t.sqrt());
        pts.push(e0 + t.sqrt());
        let curve = HyperellipticCurve::with_threshold(pts, 1e-12)?;
        // the collision pair must occupy the cut of the last handle
        let pos = curve
            .branch_points()
            .iter()
            .position(|&p| (p - (e0 - t.sqrt())).norm() < 1e-14)
            .unwrap();
        if pos != 2 * g - 2 {
            return Err(DegenError::FamilyLeavesTransversalSlice(format!(
                "collision pair sits at sorted slot {pos}, expected {}",
                2 * g - 2
            )));
        }
        let marking = HomologyMarking::standard(&curve);
        let pd = period_matrix(&curve, &marking, quad_tol)?;
        points.push(FamilyPoint {
            param: t,
            plumbing: t,
            pd,
        });
    }
    // normalized limit: the outer points alone (genus g-1)
    let limit_curve = HyperellipticCurve::new(outer)?;
    let limit_marking = HomologyMarking::standard(&limit_curve);
    let limit_pd = period_matrix(&limit_curve, &limit_marking, quad_tol)?;
    Ok(DegenerationFamily {
        kind: FamilyKind::Irreducible,
        points,
        genus: g,
        limit: LimitData {
            outer: Some(limit_pd),
            inner: None,
            outer_node_index: None,
        },
    })
}

/// Split marking for a cluster family: inner chain on the first 2j+1 points,
/// outer chain on the remaining 2(g-j)+1 points, skipping the bridge gap.
fn split_marking(curve: &HyperellipticCurve, j: usize) -> Result<HomologyMarking, DegenError> {
    let g = curve.genus();
    let n_gaps = curve.branch_points().len() - 1;
    let mut coeffs = DMatrix::<i64>::zeros(2 * g, n_gaps);
    // inner handles k = 0..j-1 over cluster gaps 0..2j-1
    for k in 0..j {
        coeffs[(k, 2 * k)] = 1;
        for m in k..j {
            coeffs[(k + g, 2 * m + 1)] = 1;
        }
    }
    // outer handles k = 0..g-j-1 over gaps 2j+1..2g
    for k in 0..(g - j) {
        coeffs[(j + k, 2 * j + 2 * k + 1)] = 1;
        for m in k..(g - j) {
            coeffs[(j + k + g, 2 * j + 2 * m + 2)] = 1;
        }
    }
    Ok(HomologyMarking::custom(curve, coeffs).map_err(crate::surface::SurfaceError::from)?)
}

/// Family of curves y^2 = prod (x - s u_i) * prod (x - w_l) with the genus-j
/// cluster scaled by s; the plumbing parameter calibrates to sqrt(s) through
/// the canonical node charts.
pub fn reducible_family(
    inner_u: Vec<Complex64>,
    outer_w: Vec<Complex64>,
    j: usize,
    grid_s: Vec<f64>,
    quad_tol: f64,
) -> Result<DegenerationFamily, DegenError> {
    assert_eq!(inner_u.len(), 2 * j + 1, "cluster needs 2j+1 points");
    let g_minus_j = (outer_w.len() - 1) / 2;
    assert_eq!(outer_w.len(), 2 * g_minus_j + 1);
    let g = j + g_minus_j;
    let u_max = inner_u.iter().map(|u| u.norm()).fold(0.0_f64, f64::max);
    let w_min = outer_w.iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min);
    for &s in &grid_s {
        if s * u_max > 0.2 * w_min {
            return Err(DegenError::ClusterOverlap { s });
        }
    }
    let mut points = Vec::with_capacity(grid_s.len());
    for &s in &grid_s {
        let mut pts: Vec<Complex64> = inner_u.iter().map(|&u| u * s).collect();
        pts.extend_from_slice(&outer_w);
        let curve = HyperellipticCurve::with_threshold(pts, 1e-14)?;
        let marking = split_marking(&curve, j)?;
        let pd = period_matrix(&curve, &marking, quad_tol)?;
        points.push(FamilyPoint {
            param: s,
            plumbing: s.sqrt(),
            pd,
        });
    }
    // inner limit: the cluster in its own scale (odd model, genus j)
    let inner_curve = HyperellipticCurve::new(inner_u)?;
    let inner_pd = period_matrix(&inner_curve, &HomologyMarking::standard(&inner_curve), quad_tol)?;
    // outer limit: the node at the origin joins the outer points (even model)
    let mut outer_pts = vec![Complex64::new(0.0, 0.0)];
    outer_pts.extend_from_slice(&outer_w);
    let outer_curve = HyperellipticCurve::new(outer_pts)?;
    let node_index = outer_curve
        .branch_points()
        .iter()
        .position(|p| p.norm() < 1e-14)
        .unwrap();
    // outer marking: chain over the w-gaps only (the restriction of the split
    // marking), skipping the gap adjacent to the node
    let n_gaps_outer = outer_curve.branch_points().len() - 1;
    let mut oc = DMatrix::<i64>::zeros(2 * g_minus_j, n_gaps_outer);
    // node sits first in sorted order for positive real w; handle general
    // order by locating the w-gaps after the node index
    for k in 0..g_minus_j {
        oc[(k, node_index + 2 * k + 1)] = 1;
        for m in k..g_minus_j {
            oc[(k + g_minus_j, node_index + 2 * m + 2)] = 1;
        }
    }
    let outer_marking =
        HomologyMarking::custom(&outer_curve, oc).map_err(crate::surface::SurfaceError::from)?;
    let outer_pd = period_matrix(&outer_curve, &outer_marking, quad_tol)?;
    Ok(DegenerationFamily {
        kind: FamilyKind::Reducible { j },
        points,
        genus: g,
        limit: LimitData {
            outer: Some(outer_pd),
            inner: Some(inner_pd),
            outer_node_index: Some(node_index),
        },
    })
}

/// Merging-zeros family: an irreducible collision whose colliding pair is the
/// zero pair of a designated odd spinor. Construction-wise this is the
/// irreducible family; the designation happens in the exponent run.
pub fn zg_family(
    outer: Vec<Complex64>,
    e0: Complex64,
    grid: Vec<f64>,
    quad_tol: f64,
) -> Result<DegenerationFamily, DegenError> {
    let mut fam = irreducible_family(outer, e0, grid, quad_tol)?;
    fam.kind = FamilyKind::ZgCollision;
    Ok(fam)
}
