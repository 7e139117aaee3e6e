//! Reconstruction of reflectionless one-dimensional potentials from their
//! bound-state spectra.
//!
//! A potential that supports bound states at energies `E_n = -c_phys * kappa_n^2`
//! and reflects nothing at any positive energy is determined by the decay rates
//! `kappa_n` together with one norming constant per state. This crate builds the
//! potential as the second log-derivative of a determinant, evaluated through a
//! closed-form expansion into `2^(N-1)` cosh terms that stays stable far beyond
//! the range where the determinant itself overflows.
//!
//! The pieces:
//!
//! * [`spectral`]: input validation and conversion between norming conventions.
//! * [`alternant`]: closed-form determinants of the interaction matrices that
//!   furnish the expansion coefficients, plus slow oracles to check them.
//! * [`tau`]: the cosh-term expansion, its stabilized evaluator, and sampled
//!   potential curves.
//! * [`naive`]: direct determinant evaluation on the same matrices; a slow
//!   cross-check and benchmark baseline for [`tau`].
//! * [`wavefunctions`]: bound-state wavefunctions recovered from the same data.
//! * [`spectra`]: spectra of solvable wells used as presets and test fixtures.
//! * [`verify`]: an independent Schroedinger solver that re-derives bound-state
//!   energies and reflection coefficients from a sampled curve.

pub mod alternant;
mod dd;
pub mod error;
mod linalg;
pub mod naive;
pub mod spectra;
pub mod spectral;
pub mod tau;
pub mod verify;
pub mod wavefunctions;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
