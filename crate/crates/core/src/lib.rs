//! Classical toolkit for the Gutzwiller wave function (GWF) of the
//! one-dimensional Fermi-Hubbard chain.
//!
//! The crate covers the full classical pipeline needed to construct and
//! verify GWF preparation:
//!
//! - [`model`] — chain parameters (sites, hopping, interaction, filling),
//! - [`basis`] — fixed-particle-number Fock basis over 2N spin-orbitals,
//! - [`hamiltonian`] — sparse sector Hamiltonian with Jordan-Wigner signs,
//! - [`solver`] — Lanczos ground states plus a dense oracle,
//! - [`reference`] — noninteracting (Slater determinant) reference states,
//! - [`meanfield`] — self-consistent Hartree-Fock ground states,
//! - [`gutzwiller`] — projector, optimal-g search, success probability and
//!   repetition estimators.

pub mod basis;
pub mod error;
pub mod gutzwiller;
pub mod hamiltonian;
mod linalg;
pub mod meanfield;
pub mod model;
pub mod reference;
pub mod solver;
pub mod state;

pub use basis::FockBasis;
pub use error::CoreError;
pub use gutzwiller::{DoubleOccSpectrum, GwfOptimum, GwfResult};
pub use hamiltonian::SparseHamiltonian;
pub use meanfield::HfSolution;
pub use model::{Boundary, ModelSpec};
pub use reference::OrbitalBasis;
pub use solver::GroundStateResult;
pub use state::SectorState;
