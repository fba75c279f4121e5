//! Dense statevector simulation with ancilla post-selection.
//!
//! Qubit q is bit q of the amplitude index (little endian). Macro gates
//! execute natively from their defining matrices, so lowered circuits can
//! be verified against them. Post-selection removes the measured qubits
//! and renormalizes; `sector_project` maps a full-register state back to
//! sector amplitudes, applying the label permutation and the fermionic
//! reordering sign between line order and the spin-blocked convention.

use crate::circuit::Circuit;
use crate::error::CircuitError;
use crate::gate::{Gate, QubitLabel, Spin};
use gwf_core::{FockBasis, SectorState};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// Memory guard: 2^24 amplitudes = 256 MiB.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct PostSelection {
    /// Measured subset, ascending qubit indices.
    pub qubits: Vec<usize>,
    /// Required outcome per measured qubit.
    pub outcomes: Vec<bool>,
    /// Probability of observing the required outcomes.
    pub probability: f64,
    /// Renormalized state over the remaining qubits.
    pub collapsed: StateVector,
}

impl StateVector {
    pub fn zero_state(n_qubits: usize) -> Result<Self, CircuitError> {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self, CircuitError> {
        if n_qubits > MAX_QUBITS {
            return Err(CircuitError::TooManyQubits {
                requested: n_qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(CircuitError::ParameterOutOfRange(format!(
                "basis index {index} outside {dim}-dimensional register"
            )));
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self, CircuitError> {
        if n_qubits > MAX_QUBITS {
            return Err(CircuitError::TooManyQubits {
                requested: n_qubits,
                cap: MAX_QUBITS,
            });
        }
        if amps.len() != 1usize << n_qubits {
            return Err(CircuitError::WidthMismatch {
                expected: 1usize << n_qubits,
                got: amps.len(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn overlap(&self, other: &Self) -> Result<Complex64, CircuitError> {
        if self.n_qubits != other.n_qubits {
            return Err(CircuitError::WidthMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Raw amplitude dump: little-endian f64 (re, im) pairs in index order.
    pub fn dump_binary(&self, path: &std::path::Path) -> std::io::Result<()> {
        let mut bytes = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            bytes.extend_from_slice(&a.re.to_le_bytes());
            bytes.extend_from_slice(&a.im.to_le_bytes());
        }
        std::fs::write(path, bytes)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), CircuitError> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::X { q } => self.controlled_single(0, q, X_MAT),
            Gate::H { q } => self.controlled_single(0, q, H_MAT),
            Gate::T { q } => self.controlled_single(0, q, T_MAT),
            Gate::Tdg { q } => self.controlled_single(0, q, TDG_MAT),
            Gate::Ry { q, angle } => self.controlled_single(0, q, ry_mat(angle)),
            Gate::Cnot { control, target } => {
                self.controlled_single(1usize << control, target, X_MAT)
            }
            Gate::CRy { control, target, angle } => {
                self.controlled_single(1usize << control, target, ry_mat(angle))
            }
            Gate::CCRy { control1, control2, target, angle } => self.controlled_single(
                (1usize << control1) | (1usize << control2),
                target,
                ry_mat(angle),
            ),
            Gate::Swap { a, b } => self.swap_pair(a, b, 1.0),
            Gate::Fswap { a, b } => self.swap_pair(a, b, -1.0),
            // Measurements collapse via post_select, not in unitary runs.
            Gate::MeasureZ { .. } => {}
        }
        Ok(())
    }

    /// Apply a 2×2 matrix to `target`, restricted to components where every
    /// bit of `control_mask` is set.
    fn controlled_single(&mut self, control_mask: usize, target: usize, m: [Complex64; 4]) {
        let tmask = 1usize << target;
        let block = tmask << 1;
        self.amps
            .par_chunks_mut(block)
            .enumerate()
            .for_each(|(blk, chunk)| {
                let base = blk * block;
                let (lo, hi) = chunk.split_at_mut(tmask);
                for j in 0..tmask {
                    let idx = base + j;
                    if idx & control_mask == control_mask {
                        let a = lo[j];
                        let b = hi[j];
                        lo[j] = m[0] * a + m[1] * b;
                        hi[j] = m[2] * a + m[3] * b;
                    }
                }
            });
    }

    /// Exchange |01⟩ ↔ |10⟩ on (a, b) and scale |11⟩ by `phase11`.
    fn swap_pair(&mut self, a: usize, b: usize, phase11: f64) {
        let (lo_q, hi_q) = if a < b { (a, b) } else { (b, a) };
        let lo_mask = 1usize << lo_q;
        let hi_mask = 1usize << hi_q;
        let block = hi_mask << 1;
        self.amps
            .par_chunks_mut(block)
            .enumerate()
            .for_each(|(blk, chunk)| {
                let base = blk * block;
                let (zero_half, one_half) = chunk.split_at_mut(hi_mask);
                for j in 0..hi_mask {
                    let idx = base + j;
                    if idx & lo_mask == 0 {
                        // |0_lo 1_hi⟩ at one_half[j] ↔ |1_lo 0_hi⟩ at zero_half[j | lo]
                        std::mem::swap(&mut one_half[j], &mut zero_half[j | lo_mask]);
                    } else if phase11 != 1.0 {
                        one_half[j] *= phase11;
                    }
                }
            });
    }
}

/// Execute a circuit on an initial state; measurements are ignored
/// (post-select afterwards to read them out).
pub fn run(c: &Circuit, initial: &StateVector) -> Result<StateVector, CircuitError> {
    if initial.n_qubits() != c.width() {
        return Err(CircuitError::WidthMismatch {
            expected: c.width(),
            got: initial.n_qubits(),
        });
    }
    let mut state = initial.clone();
    for gate in c.gates() {
        state.apply_gate(gate)?;
    }
    Ok(state)
}

/// Project onto the given outcomes of a qubit subset; the collapsed state
/// drops the measured qubits (remaining qubits keep their relative order).
pub fn post_select(
    v: &StateVector,
    qubits: &[usize],
    outcomes: &[bool],
) -> Result<PostSelection, CircuitError> {
    if qubits.len() != outcomes.len() {
        return Err(CircuitError::ParameterOutOfRange(
            "one outcome per measured qubit".into(),
        ));
    }
    let mut order: Vec<usize> = (0..qubits.len()).collect();
    order.sort_by_key(|&i| qubits[i]);
    let sorted_qubits: Vec<usize> = order.iter().map(|&i| qubits[i]).collect();
    let sorted_outcomes: Vec<bool> = order.iter().map(|&i| outcomes[i]).collect();
    for (i, &q) in sorted_qubits.iter().enumerate() {
        if q >= v.n_qubits() {
            return Err(CircuitError::ParameterOutOfRange(format!(
                "measured qubit {q} outside register"
            )));
        }
        if i > 0 && sorted_qubits[i - 1] == q {
            return Err(CircuitError::ParameterOutOfRange(format!(
                "qubit {q} measured twice"
            )));
        }
    }

    let mut required = 0usize;
    let mut measured_mask = 0usize;
    for (&q, &o) in sorted_qubits.iter().zip(&sorted_outcomes) {
        measured_mask |= 1 << q;
        if o {
            required |= 1 << q;
        }
    }

    let kept = v.n_qubits() - sorted_qubits.len();
    let mut collapsed = vec![Complex64::ZERO; 1usize << kept];
    let mut probability = 0.0f64;
    for (idx, &a) in v.amplitudes().iter().enumerate() {
        if idx & measured_mask == required {
            probability += a.norm_sqr();
            let mut compressed = 0usize;
            let mut out_bit = 0usize;
            for q in 0..v.n_qubits() {
                if measured_mask & (1 << q) == 0 {
                    if idx & (1 << q) != 0 {
                        compressed |= 1 << out_bit;
                    }
                    out_bit += 1;
                }
            }
            collapsed[compressed] = a;
        }
    }
    if probability < 1e-300 {
        return Err(CircuitError::ZeroProbability);
    }
    let scale = 1.0 / probability.sqrt();
    for a in &mut collapsed {
        *a *= scale;
    }
    Ok(PostSelection {
        qubits: sorted_qubits,
        outcomes: sorted_outcomes,
        probability,
        collapsed: StateVector {
            n_qubits: kept,
            amps: collapsed,
        },
    })
}

/// Extract sector amplitudes from a register whose line `q` carries
/// `labels[q]`. The amplitude of each sector word picks up the parity of
/// the permutation between orbital order and line order, keeping the
/// result in the spin-blocked fermionic convention. Errors when more than
/// `1e-10` probability lies outside the sector.
pub fn sector_project(
    v: &StateVector,
    basis: &Arc<FockBasis>,
    labels: &[QubitLabel],
) -> Result<SectorState, CircuitError> {
    let n = basis.n_sites();
    if labels.len() != v.n_qubits() {
        return Err(CircuitError::WidthMismatch {
            expected: v.n_qubits(),
            got: labels.len(),
        });
    }
    let line_of = orbital_lines(labels, n)?;
    let amps: Vec<Complex64> = basis
        .words()
        .par_iter()
        .map(|&w| {
            let (sign, idx) = word_index_and_sign(w, &line_of);
            v.amplitudes()[idx] * sign
        })
        .collect();
    let sector_norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let leak = v.norm_sqr() - sector_norm;
    if leak > 1e-10 {
        return Err(CircuitError::SectorLeakage { leak });
    }
    Ok(SectorState::from_amplitudes(Arc::clone(basis), amps)?)
}

/// Inverse of [`sector_project`]: place sector amplitudes into a full
/// register (unlisted lines stay |0⟩).
pub fn embed_sector_state(
    state: &SectorState,
    labels: &[QubitLabel],
) -> Result<StateVector, CircuitError> {
    let n = state.basis().n_sites();
    let n_qubits = labels.len();
    if n_qubits > MAX_QUBITS {
        return Err(CircuitError::TooManyQubits {
            requested: n_qubits,
            cap: MAX_QUBITS,
        });
    }
    let line_of = orbital_lines(labels, n)?;
    let mut amps = vec![Complex64::ZERO; 1usize << n_qubits];
    for (i, &w) in state.basis().words().iter().enumerate() {
        let (sign, idx) = word_index_and_sign(w, &line_of);
        amps[idx] = state.amplitudes()[i] * sign;
    }
    StateVector::from_amplitudes(n_qubits, amps)
}

/// Line of each spin orbital (0..N = up sites, N..2N = down sites).
fn orbital_lines(labels: &[QubitLabel], n: usize) -> Result<Vec<usize>, CircuitError> {
    let mut line_of = vec![usize::MAX; 2 * n];
    for (line, label) in labels.iter().enumerate() {
        if let QubitLabel::Site { site, spin } = label {
            let orbital = match spin {
                Spin::Up => *site,
                Spin::Down => n + *site,
            };
            if *site >= n || line_of[orbital] != usize::MAX {
                return Err(CircuitError::ParameterOutOfRange(format!(
                    "bad or duplicate label {label}"
                )));
            }
            line_of[orbital] = line;
        }
    }
    if line_of.iter().any(|&l| l == usize::MAX) {
        return Err(CircuitError::ParameterOutOfRange(
            "labels must cover every spin orbital".into(),
        ));
    }
    Ok(line_of)
}

/// Register index of a sector word plus the fermionic reordering sign:
/// the parity of inversions between ascending orbital order and the line
/// order those orbitals occupy.
fn word_index_and_sign(word: u64, line_of: &[usize]) -> (f64, usize) {
    let mut lines: Vec<usize> = Vec::with_capacity(word.count_ones() as usize);
    let mut bits = word;
    while bits != 0 {
        let orbital = bits.trailing_zeros() as usize;
        lines.push(line_of[orbital]);
        bits &= bits - 1;
    }
    let mut idx = 0usize;
    let mut inversions = 0usize;
    for (i, &l) in lines.iter().enumerate() {
        idx |= 1 << l;
        for &m in &lines[..i] {
            if m > l {
                inversions += 1;
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    (sign, idx)
}

/// Dense unitary of a small circuit, built column by column. Test support
/// for verifying macro-gate lowerings.
pub fn circuit_unitary(c: &Circuit) -> Result<Vec<Vec<Complex64>>, CircuitError> {
    if c.width() > 10 {
        return Err(CircuitError::TooManyQubits {
            requested: c.width(),
            cap: 10,
        });
    }
    let dim = 1usize << c.width();
    let mut cols = Vec::with_capacity(dim);
    for b in 0..dim {
        let out = run(c, &StateVector::basis_state(c.width(), b)?)?;
        cols.push(out.amplitudes().to_vec());
    }
    Ok(cols)
}

const X_MAT: [Complex64; 4] = [
    Complex64::ZERO,
    Complex64::ONE,
    Complex64::ONE,
    Complex64::ZERO,
];
const H_MAT: [Complex64; 4] = [
    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
];
const T_MAT: [Complex64; 4] = [
    Complex64::ONE,
    Complex64::ZERO,
    Complex64::ZERO,
    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
];
const TDG_MAT: [Complex64; 4] = [
    Complex64::ONE,
    Complex64::ZERO,
    Complex64::ZERO,
    Complex64::new(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2),
];

fn ry_mat(angle: f64) -> [Complex64; 4] {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    [
        Complex64::new(c, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(c, 0.0),
    ]
}
