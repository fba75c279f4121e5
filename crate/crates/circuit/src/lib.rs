//! Quantum-circuit side of the Gutzwiller toolkit: a small gate IR,
//! compiler passes that build the full preparation routine (Givens-rotation
//! reference-state prep, fermionic-SWAP reordering, SWAP-routed
//! ancilla-controlled projection), exact CNOT resource metrics, OpenQASM
//! 2.0 emission/parsing, and a dense statevector simulator used as the
//! verification oracle.

pub mod circuit;
pub mod error;
pub mod gate;
pub mod givens;
pub mod lower;
pub mod metrics;
pub mod prep;
pub mod projection;
pub mod qasm;
pub mod sim;

pub use circuit::{Circuit, Connectivity, Stage};
pub use error::CircuitError;
pub use gate::{Gate, QubitLabel, Spin};
pub use givens::{givens_decompose, GivensDecomposition, GivensRotation};
pub use lower::lower;
pub use metrics::{metrics, MetricsReport};
pub use prep::{build_gwf_circuit, build_prep_circuit};
pub use projection::{build_projection_circuit, projection_angle};
pub use sim::{PostSelection, StateVector};
