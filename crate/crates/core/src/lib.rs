//! Certification toolkit for bosonic Gaussian channels at the
//! covariance-matrix level.
//!
//! A Gaussian channel acts on covariance matrices as `Γ ↦ XΓX^T + Y`. This
//! crate decides, with eigenvalue-level certificates:
//!
//! - whether `(X, Y)` is a valid (completely positive) channel,
//! - whether it is gauge covariant (`[X,σ] = [Y,σ] = 0`),
//! - whether it is PPT, and
//! - whether it is entanglement-breaking, either constructively (for gauge
//!   covariant channels PPT and entanglement breaking coincide, with an
//!   explicit measure-and-prepare decomposition) or through a semidefinite
//!   feasibility program with bisection,
//!
//! plus verification of dual witnesses that certify upper bounds on the
//! semidefinite value, and construction of channels from passive dilations
//! (beamsplitter/phase-shifter circuits coupling to an environment state).

pub mod channel;
pub mod eb;
pub mod mat;
pub mod symplectic;
pub mod witness;

#[cfg(test)]
pub(crate) mod testutil;

pub use channel::{DilationSpec, GaussianChannel};
pub use eb::{EbDecomposition, EbMethod, EbStatus, EbVerdict, SdpResult};
pub use mat::{CMatrix, HermitianMatrix, RealMatrix};
pub use symplectic::{CoordOrder, CovarianceMatrix, PassiveUnitary};
pub use witness::{LiftedChannel, Witness, WitnessCertificate};
