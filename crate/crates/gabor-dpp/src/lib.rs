//! Time-frequency localization spectra and determinantal point processes in
//! phase space.
//!
//! The crate builds up from special functions (Laguerre, Hermite, incomplete
//! gamma, Gauss-Legendre rules) to short-time Fourier transforms with Hermite
//! windows, localization (Toeplitz-type) operators over phase-space domains,
//! their eigenvalue plateaus, planar determinantal ensembles attached to the
//! eigenfunctions (finite Ginibre and higher polyanalytic levels), and exact
//! samplers for those ensembles.
//!
//! Entry points:
//! - [`specfun`]: scalar special functions and quadrature rules.
//! - [`phasespace`]: windows, phase-space points, closed-form and numeric
//!   short-time Fourier transforms, reproducing kernels.
//! - [`domains`]: phase-space regions (disks, annuli, rectangles, polygons)
//!   with measures, perimeters and product quadratures.
//! - [`toeplitz`]: Galerkin assembly of localization operators in the Hermite
//!   basis, Hermitian eigendecomposition, eigenvalue counting.
//! - [`ensembles`]: rank-N projection kernels, intensities, L1 comparisons
//!   between localization ensembles and their closed-form counterparts.
//! - [`sampling`]: exact determinantal samplers, radial laws, hole
//!   probabilities, goodness-of-fit reports.
//! - [`cli`]: experiment drivers behind the `gabor-dpp` binary (CSV/SVG
//!   emission, deterministic reruns).

pub mod cli;
pub mod domains;
pub mod ensembles;
pub mod phasespace;
pub mod rng;
pub mod sampling;
pub mod specfun;
pub mod toeplitz;

use thiserror::Error as ThisError;

/// Crate-wide error type. Hard failures only; recoverable accuracy concerns
/// surface as warnings on the artifact structs instead.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("insufficient samples: got {got}, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
