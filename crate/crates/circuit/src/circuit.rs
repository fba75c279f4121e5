//! Circuit container: ordered gates over a fixed qubit line, with
//! connectivity annotation, per-stage gate ranges and label tracking.

use crate::error::CircuitError;
use crate::gate::{Gate, QubitLabel, Spin};
use serde::Serialize;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    AllToAll,
    Linear,
}

/// Pipeline stages of the preparation routine; metrics are reported per
/// stage and stages act as scheduling barriers for the depth count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Prep,
    Reorder,
    AncillaRoute,
    CcU,
    AncillaUnroute,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Prep => "prep",
            Stage::Reorder => "reorder",
            Stage::AncillaRoute => "ancilla_route",
            Stage::CcU => "ccu",
            Stage::AncillaUnroute => "ancilla_unroute",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    connectivity: Connectivity,
    initial_labels: Vec<QubitLabel>,
    final_labels: Vec<QubitLabel>,
    stages: Vec<(Stage, Range<usize>)>,
}

impl Circuit {
    pub fn new(width: usize, connectivity: Connectivity) -> Self {
        let labels: Vec<QubitLabel> = (0..width).map(QubitLabel::Wire).collect();
        Self {
            width,
            gates: Vec::new(),
            connectivity,
            initial_labels: labels.clone(),
            final_labels: labels,
            stages: Vec::new(),
        }
    }

    pub fn with_labels(
        width: usize,
        connectivity: Connectivity,
        labels: Vec<QubitLabel>,
    ) -> Result<Self, CircuitError> {
        if labels.len() != width {
            return Err(CircuitError::WidthMismatch {
                expected: width,
                got: labels.len(),
            });
        }
        Ok(Self {
            width,
            gates: Vec::new(),
            connectivity,
            initial_labels: labels.clone(),
            final_labels: labels,
            stages: Vec::new(),
        })
    }

    /// Standard layout for a width-2N (optionally +N ancillas) register in
    /// the spin-blocked initial ordering.
    pub fn spin_blocked_labels(n_sites: usize, with_ancillas: bool) -> Vec<QubitLabel> {
        let mut labels = Vec::new();
        for site in 0..n_sites {
            labels.push(QubitLabel::Site { site, spin: Spin::Up });
        }
        for site in 0..n_sites {
            labels.push(QubitLabel::Site { site, spin: Spin::Down });
        }
        if with_ancillas {
            for site in 0..n_sites {
                labels.push(QubitLabel::Ancilla { site });
            }
        }
        labels
    }

    /// Site-interleaved layout (after the reorder pass).
    pub fn interleaved_labels(n_sites: usize, with_ancillas: bool) -> Vec<QubitLabel> {
        let mut labels = Vec::new();
        for site in 0..n_sites {
            labels.push(QubitLabel::Site { site, spin: Spin::Up });
            labels.push(QubitLabel::Site { site, spin: Spin::Down });
        }
        if with_ancillas {
            for site in 0..n_sites {
                labels.push(QubitLabel::Ancilla { site });
            }
        }
        labels
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn initial_labels(&self) -> &[QubitLabel] {
        &self.initial_labels
    }

    /// Labels after all SWAP/FSWAP permutations in the gate list.
    pub fn final_labels(&self) -> &[QubitLabel] {
        &self.final_labels
    }

    pub fn stages(&self) -> &[(Stage, Range<usize>)] {
        &self.stages
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.width)?;
        match gate {
            Gate::Swap { a, b } | Gate::Fswap { a, b } => {
                self.final_labels.swap(a, b);
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Record the gates appended since `start` as `stage`.
    pub fn mark_stage(&mut self, stage: Stage, start: usize) {
        let end = self.gates.len();
        self.record_stage(stage, start..end);
    }

    pub(crate) fn record_stage(&mut self, stage: Stage, range: Range<usize>) {
        debug_assert!(range.end <= self.gates.len());
        if let Some((_, prev)) = self.stages.last() {
            debug_assert!(prev.end <= range.start, "stages must be disjoint and ordered");
        }
        self.stages.push((stage, range));
    }

    /// Line currently holding `label`, per the final label map.
    pub fn line_of(&self, label: QubitLabel) -> Option<usize> {
        self.final_labels.iter().position(|&l| l == label)
    }

    /// Append another circuit acting on the low lines of this register.
    /// The other circuit's initial labels must match this circuit's current
    /// final labels on those lines.
    pub fn absorb(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.width > self.width {
            return Err(CircuitError::WidthMismatch {
                expected: self.width,
                got: other.width,
            });
        }
        for (line, label) in other.initial_labels.iter().enumerate() {
            if self.final_labels[line] != *label {
                return Err(CircuitError::InvalidGate(format!(
                    "label mismatch on line {line}: {} vs {}",
                    self.final_labels[line], label
                )));
            }
        }
        let offset = self.gates.len();
        for &g in &other.gates {
            self.push(g)?;
        }
        for (stage, range) in &other.stages {
            self.stages
                .push((*stage, range.start + offset..range.end + offset));
        }
        Ok(())
    }

    /// Under linear connectivity every two-qubit gate must act on adjacent
    /// lines once lowered; macro gates are checked via their operands'
    /// spans, so run this on lowered circuits for the strict audit.
    pub fn audit_connectivity(&self) -> Result<(), CircuitError> {
        if self.connectivity == Connectivity::AllToAll {
            return Ok(());
        }
        for (index, gate) in self.gates.iter().enumerate() {
            let qs = gate.qubits();
            if qs.len() == 2 && !matches!(gate, Gate::MeasureZ { .. }) {
                let span = qs[0].abs_diff(qs[1]);
                if span != 1 {
                    return Err(CircuitError::ConnectivityViolation {
                        index,
                        gate: format!("{gate:?}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// The label permutation of a macro circuit survives lowering even
    /// though the expanded CNOT sequences carry no swap bookkeeping.
    pub(crate) fn set_final_labels(&mut self, labels: Vec<QubitLabel>) {
        debug_assert_eq!(labels.len(), self.width);
        self.final_labels = labels;
    }

    pub(crate) fn clone_shell(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: Vec::new(),
            connectivity: self.connectivity,
            initial_labels: self.initial_labels.clone(),
            final_labels: self.initial_labels.clone(),
            stages: Vec::new(),
        }
    }
}
