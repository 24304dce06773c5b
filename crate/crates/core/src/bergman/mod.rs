//! Bergman bidifferential, projective connection, Schwarzians, the cycle
//! integrals of (S_B - S_omega)/omega over the dual homology basis, and the
//! log-derivative of the tau function.

mod cycles;
mod kernel;
mod schwarzian;
mod tau;

pub use cycles::{cycle_integrals, cycle_integrals_with, ContourOpts, CycleIntegrals};
pub use kernel::{BergmanKernel, ProjectiveConnectionSample};
pub use schwarzian::{schwarzian_exact, schwarzian_fd};
pub use tau::{
    integrate_dlogtau, rbr_identity, scaling_exponent, scaling_run, tau_one_form,
    tau_one_form_opts, ScalingRun,
    tau_one_form_with_coords, RbrReport, StratumPoint, TauLogDerivative, TauOpts,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BergmanError {
    #[error("no odd characteristic has a nonsingular theta gradient at this period matrix")]
    SingularDeltaCharacteristic,
    #[error("bidifferential evaluated at coincident points")]
    CoincidentPoints,
    #[error("projective-connection stencil fit residual {0:e} above tolerance")]
    PoorFit(f64),
    #[error("differential vanishes at the requested point; Schwarzian undefined")]
    ZeroOfOmegaAtPoint,
    #[error("contour passes within {dist:e} of a pole of the integrand")]
    ContourHitsPole { dist: f64 },
    #[error("residue Laurent fit failed: {0}")]
    ResidueFitFailure(String),
    #[error("path leaves the open stratum: zeros collide or the curve degenerates")]
    PathLeavesStratum,
    #[error("step-halving estimate diverges: {coarse:e} vs {fine:e}")]
    StepEstimateDiverges { coarse: f64, fine: f64 },
    #[error("relative path geometry unsupported for crossing bookkeeping: {0}")]
    UnsupportedPathGeometry(String),
    #[error(transparent)]
    Surface(#[from] crate::surface::SurfaceError),
    #[error(transparent)]
    Theta(#[from] crate::theta::ThetaError),
    #[error(transparent)]
    Spinor(#[from] crate::spinor::SpinorError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
}
