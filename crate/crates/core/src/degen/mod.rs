//! One-parameter degenerating families of hyperelliptic curves and the
//! exponent fits that verify the boundary asymptotics of theta functions,
//! spinors and the tau function.

mod checks;
mod family;
mod fit;

pub use checks::{
    node_vector, terminal_coordinates,
    check_spinor_degeneration, check_theta_degeneration, fit_tau_boundary_exponent,
    marking_twist_ratio, reducible_first_order, FirstOrderReport, SpinorRegime, TauBoundary,
    TauExponentRun, ThetaRegime,
};
pub use family::{
    irreducible_family, reducible_family, zg_family, DegenerationFamily, FamilyKind, FamilyPoint,
};
pub use fit::{fit_exponent, ExponentFit};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DegenError {
    #[error("collision point at t={t:e} lands within the detour radius of branch point {index}")]
    CollisionHitsOtherBranchPoint { t: f64, index: usize },
    #[error("scaled cluster overlaps the fixed branch points at s={s:e}")]
    ClusterOverlap { s: f64 },
    #[error("characteristic does not split along the family's block structure")]
    CharacteristicBlockMismatch,
    #[error("sample point enters the node region at t={0:e}")]
    SamplePointEntersNodeRegion(f64),
    #[error("family leaves the transversal slice: {0}")]
    FamilyLeavesTransversalSlice(String),
    #[error("exponent fit confidence {0:e} too poor")]
    FitConfidencePoor(f64),
    #[error("no odd characteristic matches the requested boundary regime")]
    NoMatchingCharacteristic,
    #[error(transparent)]
    Surface(#[from] crate::surface::SurfaceError),
    #[error(transparent)]
    Theta(#[from] crate::theta::ThetaError),
    #[error(transparent)]
    Spinor(#[from] crate::spinor::SpinorError),
    #[error(transparent)]
    Bergman(#[from] crate::bergman::BergmanError),
}
