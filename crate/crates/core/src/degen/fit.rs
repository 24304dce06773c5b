//! Log-log exponent fitting over geometric parameter grids.

use crate::util::linear_fit;

/// Result of fitting log|quantity| against log(parameter).
#[derive(Clone, Debug, serde::Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// max absolute residual of the linear fit over the window
    pub confidence: f64,
    /// indices of the grid points used
    pub window: (usize, usize),
    /// the fitted series: (log parameter, log |value|)
    pub series: Vec<(f64, f64)>,
}

/// Fit the decay exponent of |values| against the parameters, using the
/// pre-noise window: points with |value| below `noise_floor` are dropped, and
/// the fit uses the tail of the grid (smallest parameters) where the
/// asymptotics dominate.
pub fn fit_exponent(params: &[f64], values: &[f64], noise_floor: f64) -> ExponentFit {
    assert_eq!(params.len(), values.len());
    let usable: Vec<(usize, f64, f64)> = params
        .iter()
        .zip(values)
        .enumerate()
        .filter(|(_, (_, v))| **v > noise_floor && v.is_finite())
        .map(|(i, (p, v))| (i, p.ln(), v.ln()))
        .collect();
    assert!(usable.len() >= 3, "not enough usable points for a fit");
    // use the tail half (at least 4 points) toward the boundary
    let w = usable.len().min(usable.len() / 2 + 2).max(4.min(usable.len()));
    let tail = &usable[usable.len() - w..];
    let xs: Vec<f64> = tail.iter().map(|(_, x, _)| *x).collect();
    let ys: Vec<f64> = tail.iter().map(|(_, _, y)| *y).collect();
    let (slope, intercept, resid) = linear_fit(&xs, &ys);
    ExponentFit {
        slope,
        intercept,
        confidence: resid,
        window: (tail.first().unwrap().0, tail.last().unwrap().0),
        series: usable.iter().map(|(_, x, y)| (*x, *y)).collect(),
    }
}
