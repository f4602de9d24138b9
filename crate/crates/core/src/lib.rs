//! Spin chains whose single-excitation Hamiltonian is the Jacobi matrix of a
//! discrete orthogonal polynomial family.
//!
//! The crate builds the tridiagonal chain for six families (Krawtchouk, Hahn,
//! dual Hahn, Racah, Charlier, Meixner), exposes exact spectral data from the
//! polynomials themselves, and computes the transfer amplitude f_{r,s}(t) by
//! three mutually checking routes: the spectral sum, each family's closed
//! form, and a theory-free dense eigensolver oracle.

pub mod chain;
pub mod dynamics;
pub mod hypergeom;
pub mod matrix;
pub mod oracle;
pub mod polyfam;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type for family, chain and dynamics operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Family parameters violate the validity constraints.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    /// A site or degree index lies outside the family support.
    #[error("index {index} outside support 0..={max}")]
    OutOfSupport { index: usize, max: usize },
    /// Affine transform with zero scale.
    #[error("affine transform requires lambda != 0")]
    ZeroScale,
    /// The oracle eigensolver exceeded its iteration budget.
    #[error("tridiagonal eigensolver failed to converge at index {0}")]
    ConvergenceFailure(usize),
    /// A hypergeometric series could not be evaluated.
    #[error(transparent)]
    Hypergeometric(#[from] hypergeom::HypError),
}

pub use chain::{JacobiChain, SignConvention, SpectralData};
pub use dynamics::{AmplitudeGrid, Method, PstEvent};
pub use hypergeom::SignedLog;
pub use oracle::DenseSpectrum;
pub use polyfam::{Family, WeightTable};
