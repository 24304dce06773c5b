//! Concrete Riemann-surface backend: hyperelliptic curves y^2 = prod (x - e_i),
//! homology markings, period matrices, Abel maps and local charts.

mod abel;
mod intersect;
mod charts;
mod marking;
mod path;
mod periods;
mod sheet;

pub use abel::{
    abel_increment_local, abel_map, continue_sheet, integrate_differential_between,
    recompute_b_periods, AbelValue,
};
pub use charts::{branch_cofactor, differential_value, Chart};
pub use marking::{loop_for_gap, HomologyMarking, OrientedLoop};
pub use path::{circle_loop, stadium_loop, straight_with_detours, PathSeg, PlanePath};
pub use marking::loop_for_gap_avoiding;
pub use periods::{
    gap_cycles, loop_integral, loop_integral_with, loop_samples, marking_change_between,
    period_matrix,
    safe_junction as safe_junction_between, y_from_base, DifferentialBasis, GapCycles, HalfGap,
    PeriodData,
};
pub use intersect::{symplectic_basis, transversal_crossings, LiftedPolyline};
pub use sheet::{rotated_sqrt, TrackedBranch};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("need at least 3 branch points for genus >= 1, got {0}")]
    TooFewBranchPoints(usize),
    #[error("branch points {i} and {j} are closer than the separation threshold ({dist:e} < {threshold:e})")]
    NearSingularConfiguration {
        i: usize,
        j: usize,
        dist: f64,
        threshold: f64,
    },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(#[from] crate::quad::QuadError),
    #[error("path passes through branch point {index} away from its endpoints")]
    PathThroughBranchPoint { index: usize },
    #[error("sheet mismatch: continuation along the path ends on the opposite sheet of the declared endpoint")]
    SheetDiscontinuity,
    #[error("chart not valid at this point: {0}")]
    ChartMismatch(String),
    #[error("marking is not symplectic")]
    MarkingNotSymplectic,
    #[error("cycle tangents at shared branch point {index} are nearly parallel; marking construction is ill-conditioned")]
    DegenerateChainTangent { index: usize },
    #[error("operation requires the gap to infinity, which is only available on even models")]
    InfinityGapUnavailable,
    #[error(transparent)]
    Theta(#[from] crate::theta::ThetaError),
}

/// Genus-g hyperelliptic curve y^2 = prod over branch points (x - e_i).
///
/// Stored with 2g+2 finite branch points (even model) or 2g+1 finite branch
/// points plus a branch point at infinity (odd model). The stored order is the
/// marking order: lexicographic by (Re, Im) unless overridden.
#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    branch_points: Vec<Complex64>,
    infinity_is_branch: bool,
    genus: usize,
    separation_threshold: f64,
    min_separation: f64,
}

pub const DEFAULT_SEPARATION_THRESHOLD: f64 = 1e-8;

impl HyperellipticCurve {
    /// Branch points sorted lexicographically by (Re, Im).
    pub fn new(branch_points: Vec<Complex64>) -> Result<Self, SurfaceError> {
        Self::with_threshold(branch_points, DEFAULT_SEPARATION_THRESHOLD)
    }

    pub fn with_threshold(
        mut branch_points: Vec<Complex64>,
        threshold: f64,
    ) -> Result<Self, SurfaceError> {
        branch_points.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        Self::with_order(branch_points, threshold)
    }

    /// Use the given order as the marking order (no sorting).
    pub fn with_order(branch_points: Vec<Complex64>, threshold: f64) -> Result<Self, SurfaceError> {
        let n = branch_points.len();
        if n < 3 {
            return Err(SurfaceError::TooFewBranchPoints(n));
        }
        let infinity_is_branch = n % 2 == 1;
        let genus = if infinity_is_branch {
            (n - 1) / 2
        } else {
            (n - 2) / 2
        };
        let mut min_sep = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (branch_points[i] - branch_points[j]).norm();
                if d < threshold {
                    return Err(SurfaceError::NearSingularConfiguration {
                        i,
                        j,
                        dist: d,
                        threshold,
                    });
                }
                min_sep = min_sep.min(d);
            }
        }
        Ok(Self {
            branch_points,
            infinity_is_branch,
            genus,
            separation_threshold: threshold,
            min_separation: min_sep,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn branch_points(&self) -> &[Complex64] {
        &self.branch_points
    }

    pub fn infinity_is_branch(&self) -> bool {
        self.infinity_is_branch
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    pub fn separation_threshold(&self) -> f64 {
        self.separation_threshold
    }

    /// Detour radius around branch point i: a quarter of its distance to the
    /// nearest other branch point.
    pub fn detour_radius(&self, i: usize) -> f64 {
        let e = self.branch_points[i];
        0.25 * self
            .branch_points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &f)| (e - f).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Reference branch of y: product of rotated-principal square roots.
    pub fn reference_y(&self, x: Complex64) -> Complex64 {
        self.branch_points
            .iter()
            .map(|&e| sheet::rotated_sqrt(x - e))
            .product()
    }

    /// y^2 = prod (x - e_i), evaluated in product form.
    pub fn y_squared(&self, x: Complex64) -> Complex64 {
        self.branch_points.iter().map(|&e| x - e).product()
    }

    /// Base point for sheet continuation, away from all branch points.
    pub fn base_point(&self) -> Complex64 {
        let n = self.branch_points.len() as f64;
        let centroid: Complex64 = self.branch_points.iter().sum::<Complex64>() / n;
        let diam = self
            .branch_points
            .iter()
            .map(|&e| (e - centroid).norm())
            .fold(0.0_f64, f64::max);
        centroid + Complex64::new(0.171, 2.0 * diam + 1.0)
    }

    /// y value of a surface point (zero at branch points, None at infinity).
    pub fn y_of(&self, p: &SurfacePoint) -> Option<Complex64> {
        match p {
            SurfacePoint::Regular { x, sheet } => Some(self.reference_y(*x) * (*sheet as f64)),
            SurfacePoint::Branch { .. } => Some(Complex64::new(0.0, 0.0)),
            SurfacePoint::Infinity { .. } => None,
        }
    }

    pub fn x_of(&self, p: &SurfacePoint) -> Option<Complex64> {
        match p {
            SurfacePoint::Regular { x, .. } => Some(*x),
            SurfacePoint::Branch { index } => Some(self.branch_points[*index]),
            SurfacePoint::Infinity { .. } => None,
        }
    }

    /// Classify an x-value: a nearby branch point index, if any.
    pub fn nearest_branch(&self, x: Complex64) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for (i, &e) in self.branch_points.iter().enumerate() {
            let d = (x - e).norm();
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }
}

/// Point on the hyperelliptic surface.
///
/// `sheet` is the sign of y relative to the reference branch `reference_y`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum SurfacePoint {
    Regular { x: Complex64, sheet: i8 },
    Branch { index: usize },
    Infinity { sheet: i8 },
}

impl SurfacePoint {
    pub fn regular(x: Complex64, sheet: i8) -> Self {
        SurfacePoint::Regular { x, sheet }
    }

    /// The point with the same x on the opposite sheet (hyperelliptic involution).
    pub fn involution(&self) -> Self {
        match *self {
            SurfacePoint::Regular { x, sheet } => SurfacePoint::Regular { x, sheet: -sheet },
            SurfacePoint::Branch { index } => SurfacePoint::Branch { index },
            SurfacePoint::Infinity { sheet } => SurfacePoint::Infinity { sheet: -sheet },
        }
    }
}
