//! Numerical laboratory for spin curves.
//!
//! The crate computes Riemann theta functions with half-integer characteristics,
//! period matrices and Abel maps of hyperelliptic curves, odd spinor differentials
//! and their zero divisors, the Bergman bidifferential / projective connection and
//! the log-derivative of the associated tau function, boundary exponent fits along
//! degenerating families, and exact rational divisor-class bookkeeping.

pub mod bergman;
pub mod degen;
pub mod picard;
pub mod quad;
pub mod report;
pub mod spinor;
pub mod surface;
pub mod theta;
pub mod util;
pub mod verify;

pub use num_complex::Complex64;

pub use picard::DivisorClass;

pub use spinor::{HomologicalCoords, SpinorSquare};
pub use surface::{HomologyMarking, HyperellipticCurve, SurfacePoint};
pub use theta::{Characteristic, PeriodMatrix, SymplecticMap, ThetaResult};
