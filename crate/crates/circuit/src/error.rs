//! Error type for circuit construction, lowering and simulation.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("circuit width {expected} does not match {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("{requested} qubits exceed the statevector cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("macro gate {0} must be lowered first")]
    UnloweredGate(String),

    #[error("post-selection outcome has vanishing probability")]
    ZeroProbability,

    #[error("state leaks {leak:.3e} probability outside the sector (sign or routing bug)")]
    SectorLeakage { leak: f64 },

    #[error("gate {index} ({gate}) violates linear connectivity")]
    ConnectivityViolation { index: usize, gate: String },

    #[error("linear-connectivity lowering needs consecutive (c1, c2, target) lines, got {0}")]
    AdjacencyRequired(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("QASM parse error at line {line}: {message}")]
    QasmParse { line: usize, message: String },

    #[error(transparent)]
    Core(#[from] gwf_core::CoreError),
}
