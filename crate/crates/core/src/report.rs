//! Machine-readable report types shared by the library and the CLI.

use crate::spinor::{HomologicalCoords, SpinorSquare};
use crate::surface::{HyperellipticCurve, SurfacePoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn c2(v: Complex64) -> [f64; 2] {
    [v.re, v.im]
}

/// Curve input file: branch points and an optional marking override.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub branch_points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<MarkingFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingFile {
    /// permutation of the sorted branch points to use as the marking order
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    /// explicit cycle coefficients over the gap cycles (rows a_1..a_g, b_1..b_g)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<Vec<i64>>>,
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<HyperellipticCurve, crate::surface::SurfaceError> {
        let mut pts: Vec<Complex64> = self
            .branch_points
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        if let Some(mk) = &self.marking {
            if let Some(order) = &mk.order {
                pts.sort_by(|a, b| {
                    (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap()
                });
                let reordered: Vec<Complex64> = order.iter().map(|&i| pts[i]).collect();
                return HyperellipticCurve::with_order(
                    reordered,
                    crate::surface::DEFAULT_SEPARATION_THRESHOLD,
                );
            }
        }
        HyperellipticCurve::new(pts)
    }

    pub fn to_marking(
        &self,
        curve: &HyperellipticCurve,
    ) -> Result<crate::surface::HomologyMarking, crate::surface::SurfaceError> {
        if let Some(mk) = &self.marking {
            if let Some(cycles) = &mk.cycles {
                let rows = cycles.len();
                let cols = cycles.first().map(|r| r.len()).unwrap_or(0);
                let coeffs = nalgebra::DMatrix::from_fn(rows, cols, |r, c| cycles[r][c]);
                return crate::surface::HomologyMarking::custom(curve, coeffs);
            }
        }
        Ok(crate::surface::HomologyMarking::standard(curve))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfacePointReport {
    pub kind: String,
    pub x: Option<[f64; 2]>,
    pub sheet: Option<i8>,
    pub branch_index: Option<usize>,
}

impl SurfacePointReport {
    pub fn from_point(curve: &HyperellipticCurve, p: &SurfacePoint) -> Self {
        match p {
            SurfacePoint::Regular { x, sheet } => Self {
                kind: "regular".into(),
                x: Some([x.re, x.im]),
                sheet: Some(*sheet),
                branch_index: None,
            },
            SurfacePoint::Branch { index } => Self {
                kind: "branch".into(),
                x: Some(c2(curve.branch_points()[*index])),
                sheet: None,
                branch_index: Some(*index),
            },
            SurfacePoint::Infinity { sheet } => Self {
                kind: "infinity".into(),
                x: None,
                sheet: Some(*sheet),
                branch_index: None,
            },
        }
    }
}

/// Spinor report: characteristic, coefficients, zeros and homological
/// coordinates, with the relative-path ambiguity descriptor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpinorReport {
    pub characteristic: Vec<u8>,
    pub coefficients: Vec<[f64; 2]>,
    pub zeros: Vec<ZeroReport>,
    pub homological_coordinates: Vec<[f64; 2]>,
    /// waypoints of the relative paths; periods move by absolute periods
    /// under a different homotopy class of path
    pub relative_path_waypoints: Vec<Vec<[f64; 2]>>,
    pub has_cluster: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroReport {
    pub point: SurfacePointReport,
    pub multiplicity: usize,
    pub cluster: bool,
}

impl SpinorReport {
    pub fn build(
        curve: &HyperellipticCurve,
        sq: &SpinorSquare,
        coords: &HomologicalCoords,
    ) -> Self {
        Self {
            characteristic: sq
                .eta
                .as_ref()
                .map(|e| e.bits().to_vec())
                .unwrap_or_default(),
            coefficients: sq.coeffs.iter().map(|c| c2(*c)).collect(),
            zeros: coords
                .labels
                .iter()
                .map(|z| ZeroReport {
                    point: SurfacePointReport::from_point(curve, &z.point),
                    multiplicity: z.multiplicity,
                    cluster: z.cluster,
                })
                .collect(),
            homological_coordinates: coords.z.iter().map(|c| c2(*c)).collect(),
            relative_path_waypoints: coords
                .relative_paths
                .iter()
                .map(|p| p.iter().map(|w| c2(*w)).collect())
                .collect(),
            has_cluster: sq.has_cluster,
        }
    }
}

/// One row of a fitted series, matching the CSV column contract
/// (t, value_re, value_im, abs, fitted_slope, residual).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitRow {
    pub t: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub abs: f64,
    pub fitted_slope: f64,
    pub residual: f64,
}

pub fn fit_rows_to_csv(rows: &[FitRow]) -> String {
    let mut out = String::from("t,value_re,value_im,abs,fitted_slope,residual\n");
    for r in rows {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e}\n",
            r.t, r.value_re, r.value_im, r.abs, r.fitted_slope, r.residual
        ));
    }
    out
}

/// Tau-run report: the path/grid spec, per-step one-form values and the total.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TauRunReport {
    pub path_spec: String,
    pub steps: Vec<TauStep>,
    pub delta_log_tau: [f64; 2],
    pub error_estimate: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TauStep {
    pub param: f64,
    pub increment: [f64; 2],
    pub slope: f64,
}

/// Family specification file for degeneration runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum FamilyFile {
    Irreducible {
        outer: Vec<[f64; 2]>,
        center: [f64; 2],
        grid: GridSpec,
    },
    Reducible {
        inner: Vec<[f64; 2]>,
        outer: Vec<[f64; 2]>,
        j: usize,
        grid: GridSpec,
    },
    Zg {
        outer: Vec<[f64; 2]>,
        center: [f64; 2],
        grid: GridSpec,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t0: f64,
    pub ratio: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        (0..self.n)
            .map(|k| self.t0 * self.ratio.powi(k as i32))
            .collect()
    }
}
