//! Gate set and qubit labels.
//!
//! FSWAP, CRy and CCRy are macro gates; every circuit lowers exactly to
//! {X, H, T, Tdg, Ry, CNOT} plus terminal measurements.

use crate::error::CircuitError;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X { q: usize },
    H { q: usize },
    T { q: usize },
    Tdg { q: usize },
    Ry { q: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    Swap { a: usize, b: usize },
    /// SWAP with an extra −1 on |11⟩; preserves fermionic antisymmetry when
    /// reordering Jordan-Wigner modes.
    Fswap { a: usize, b: usize },
    CRy { control: usize, target: usize, angle: f64 },
    CCRy { control1: usize, control2: usize, target: usize, angle: f64 },
    MeasureZ { q: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X { q }
            | Gate::H { q }
            | Gate::T { q }
            | Gate::Tdg { q }
            | Gate::Ry { q, .. }
            | Gate::MeasureZ { q } => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Swap { a, b } | Gate::Fswap { a, b } => vec![a, b],
            Gate::CRy { control, target, .. } => vec![control, target],
            Gate::CCRy {
                control1,
                control2,
                target,
                ..
            } => vec![control1, control2, target],
        }
    }

    /// Macro gates must be expanded before emission or metric counting.
    pub fn is_macro(&self) -> bool {
        matches!(
            self,
            Gate::Swap { .. } | Gate::Fswap { .. } | Gate::CRy { .. } | Gate::CCRy { .. }
        )
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X { .. } => "x",
            Gate::H { .. } => "h",
            Gate::T { .. } => "t",
            Gate::Tdg { .. } => "tdg",
            Gate::Ry { .. } => "ry",
            Gate::Cnot { .. } => "cx",
            Gate::Swap { .. } => "swap",
            Gate::Fswap { .. } => "fswap",
            Gate::CRy { .. } => "cry",
            Gate::CCRy { .. } => "ccry",
            Gate::MeasureZ { .. } => "measure",
        }
    }

    pub fn validate(&self, width: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= width {
                return Err(CircuitError::InvalidGate(format!(
                    "{} touches qubit {q}, width is {width}",
                    self.name()
                )));
            }
        }
        for i in 0..qs.len() {
            for j in i + 1..qs.len() {
                if qs[i] == qs[j] {
                    return Err(CircuitError::InvalidGate(format!(
                        "{} has repeated operand {}",
                        self.name(),
                        qs[i]
                    )));
                }
            }
        }
        if let Gate::Ry { angle, .. } | Gate::CRy { angle, .. } | Gate::CCRy { angle, .. } = self {
            if !angle.is_finite() {
                return Err(CircuitError::InvalidGate(format!(
                    "{} has non-finite angle",
                    self.name()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

/// Semantic name of a circuit line, tracked through SWAP/FSWAP passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitLabel {
    /// Occupation of `site` (0-based) with the given spin.
    Site { site: usize, spin: Spin },
    /// Auxiliary projection qubit of `site` (0-based).
    Ancilla { site: usize },
    /// Unannotated wire (parsed or ad-hoc circuits).
    Wire(usize),
}

impl std::fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QubitLabel::Site { site, spin: Spin::Up } => write!(f, "site-{}-↑", site + 1),
            QubitLabel::Site { site, spin: Spin::Down } => write!(f, "site-{}-↓", site + 1),
            QubitLabel::Ancilla { site } => write!(f, "ancilla-{}", site + 1),
            QubitLabel::Wire(i) => write!(f, "q{i}"),
        }
    }
}
