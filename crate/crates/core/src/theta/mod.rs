//! Riemann theta functions with half-integer characteristics.
//!
//! Evaluation is a lattice sum over an ellipsoid with a certified Gaussian tail
//! bound, so every returned value carries an error bound. First and second
//! derivatives come from the term-wise differentiated sum, and the symplectic
//! modular transformation law is implemented exactly on characteristics.

mod eval;
mod modular;

pub use eval::{theta, theta_gradient, theta_hessian, truncation_radius, ThetaEvaluator};
pub use modular::{random_symplectic, symplectic_transform, SymplecticMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("imaginary part of the period matrix is not positive definite (min eigenvalue {0:e})")]
    DegenerateImaginaryPart(f64),
    #[error("period matrix is not symmetric within tolerance: defect {defect:e} > {tol:e}")]
    NotSymmetric { defect: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("automorphy factor det(s12*Omega + s11) is singular")]
    SingularAutomorphyFactor,
    #[error("characteristic length {0} is not even")]
    OddLengthCharacteristic(usize),
}

/// Half-integer theta characteristic stored as a bit vector in interleaved order
/// (eta_1, eta_2, ..., eta_{2g-1}, eta_{2g}).
///
/// The odd-indexed bits eta_1, eta_3, ... form the "top" row (they shift the
/// summation lattice), the even-indexed bits form the "bottom" row (they shift
/// the argument). This convention is fixed once here and used everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Characteristic {
    bits: Vec<u8>,
}

impl Characteristic {
    pub fn new(bits: Vec<u8>) -> Result<Self, ThetaError> {
        if bits.len() % 2 != 0 || bits.is_empty() {
            return Err(ThetaError::OddLengthCharacteristic(bits.len()));
        }
        Ok(Self {
            bits: bits.into_iter().map(|b| b & 1).collect(),
        })
    }

    pub fn zero(g: usize) -> Self {
        Self {
            bits: vec![0; 2 * g],
        }
    }

    pub fn genus(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Top bit of pair j (0-indexed): eta_{2j+1} in the interleaved order.
    pub fn top(&self, j: usize) -> u8 {
        self.bits[2 * j]
    }

    /// Bottom bit of pair j (0-indexed): eta_{2j+2} in the interleaved order.
    pub fn bottom(&self, j: usize) -> u8 {
        self.bits[2 * j + 1]
    }

    /// Half-integer shift vector applied to the summation lattice.
    pub fn shift_top(&self) -> Vec<f64> {
        (0..self.genus()).map(|j| self.top(j) as f64 / 2.0).collect()
    }

    /// Half-integer shift vector applied to the argument.
    pub fn shift_bottom(&self) -> Vec<f64> {
        (0..self.genus())
            .map(|j| self.bottom(j) as f64 / 2.0)
            .collect()
    }

    /// Parity sum eta_{2j} * eta_{2j-1} mod 2; 1 is odd, 0 is even.
    pub fn parity(&self) -> u8 {
        (0..self.genus()).map(|j| self.top(j) & self.bottom(j)).sum::<u8>() & 1
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == 1
    }

    /// Direct sum (eta1 on the first block of handles, eta2 on the rest).
    pub fn direct_sum(&self, other: &Characteristic) -> Characteristic {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Characteristic { bits }
    }

    /// Split off the first 2j bits as one characteristic and the rest as another.
    pub fn split(&self, j: usize) -> (Characteristic, Characteristic) {
        (
            Characteristic {
                bits: self.bits[..2 * j].to_vec(),
            },
            Characteristic {
                bits: self.bits[2 * j..].to_vec(),
            },
        )
    }
}

/// Symmetric g x g period matrix with positive definite imaginary part.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    omega: DMatrix<Complex64>,
    /// Certified bound on the symmetry defect of the matrix this was built from.
    tolerance: f64,
    min_im_eigenvalue: f64,
}

impl PeriodMatrix {
    /// Build from a matrix, symmetrizing and certifying the defect.
    pub fn new(omega: DMatrix<Complex64>, tolerance: f64) -> Result<Self, ThetaError> {
        let g = omega.nrows();
        if omega.ncols() != g {
            return Err(ThetaError::DimensionMismatch {
                expected: g,
                got: omega.ncols(),
            });
        }
        let mut defect = 0.0_f64;
        for i in 0..g {
            for j in 0..g {
                defect = defect.max((omega[(i, j)] - omega[(j, i)]).norm());
            }
        }
        if defect > tolerance {
            return Err(ThetaError::NotSymmetric { defect, tol: tolerance });
        }
        let sym = (&omega + omega.transpose()) * Complex64::new(0.5, 0.0);
        let im = sym.map(|z| z.im);
        let eig = nalgebra::SymmetricEigen::new(im);
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig <= 0.0 {
            return Err(ThetaError::DegenerateImaginaryPart(min_eig));
        }
        Ok(Self {
            omega: sym,
            tolerance,
            min_im_eigenvalue: min_eig,
        })
    }

    pub fn genus(&self) -> usize {
        self.omega.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.omega
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn min_im_eigenvalue(&self) -> f64 {
        self.min_im_eigenvalue
    }

    pub fn imaginary_part(&self) -> DMatrix<f64> {
        self.omega.map(|z| z.im)
    }
}

/// Value of a theta function (or one of its derivative components) together with
/// the certified truncation error bound and the derivative order it belongs to.
#[derive(Clone, Copy, Debug)]
pub struct ThetaResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub order: u8,
}

/// All characteristics of a given genus, in lexicographic bit order.
pub fn all_characteristics(g: usize) -> Vec<Characteristic> {
    let n = 2 * g;
    (0..(1usize << n))
        .map(|mask| {
            let bits = (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect();
            Characteristic::new(bits).unwrap()
        })
        .collect()
}
