//! Optimal constants and numerical verification for power-weighted Rellich,
//! Hardy, Hardy--Rellich, and Schmincke-type inequalities.
//!
//! The library is organized around the spherical-mode reduction: every
//! n-dimensional integral of interest collapses to a weighted radial integral
//! once a function is written as `F(r) * phi_j(theta)` with `phi_j` a unit
//! spherical harmonic of mode `j`. The modules are
//!
//! * [`spectra`] -- Laplace--Beltrami eigenvalues/multiplicities and
//!   iterated-logarithm refinement weights,
//! * [`constants`] -- every closed-form constant, coefficient set, and
//!   min-over-modes computation,
//! * [`profiles`] -- smooth compactly supported radial profiles with analytic
//!   derivatives (bumps, plateau cutoffs, extremal trial families),
//! * [`functionals`] -- adaptive quadrature, per-mode seminorms, identity
//!   checks, inequality verdicts, and the sharpness sweep,
//! * [`oracle`] -- independent discretized Rayleigh-quotient eigenvalue
//!   estimates,
//! * [`cli`] -- the command implementations behind the `rellich-lab` binary.

pub mod cli;
pub mod constants;
pub mod functionals;
pub mod oracle;
pub mod profiles;
pub mod spectra;

use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature failed to converge: best estimate {estimate}, error {error}")]
    QuadratureConvergence { estimate: f64, error: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
