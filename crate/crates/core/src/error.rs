//! Error type shared by the classical modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("sector dimension {0} exceeds supported capacity")]
    CapacityExceeded(u128),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("states live in different sector bases")]
    BasisMismatch,

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        /// Best Ritz pair found so far.
        best: Box<crate::solver::GroundStateResult>,
    },

    #[error("dense solver limited to dimension {cap}, requested {got}")]
    DenseCapExceeded { cap: usize, got: usize },

    #[error("degenerate Fermi level: orbitals {0} and {1} share an energy; select occupations explicitly")]
    DegenerateFermiLevel(usize, usize),

    #[error("no Hartree-Fock trial converged")]
    AllTrialsUnconverged,

    #[error("config parse error: {0}")]
    ConfigParse(String),
}
