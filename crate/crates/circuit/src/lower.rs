//! Macro-gate lowering to the base set {X, H, T, Tdg, Ry, CNOT}.
//!
//! Budgets per macro: SWAP = 3 CNOTs, FSWAP = 4 (SWAP merged with a
//! Hadamard-conjugated CZ), controlled-Ry = 2, doubly-controlled Ry =
//! 2 Toffolis + 2 free Ry. A Toffoli costs 6 CNOTs all-to-all; under
//! linear connectivity the first half runs with the middle and bottom
//! lines swapped, for 2·3 + 6 = 12 CNOTs.

use crate::circuit::{Circuit, Connectivity};
use crate::error::CircuitError;
use crate::gate::Gate;

/// Expand every macro gate; stage ranges are remapped onto the expanded
/// gate list and labels are preserved.
pub fn lower(c: &Circuit) -> Result<Circuit, CircuitError> {
    let mut out = c.clone_shell();
    let mut index_map: Vec<usize> = Vec::with_capacity(c.len() + 1);
    for gate in c.gates() {
        index_map.push(out.len());
        lower_gate(*gate, c.connectivity(), &mut out)?;
    }
    index_map.push(out.len());
    for (stage, range) in c.stages() {
        let lo = index_map[range.start];
        let hi = index_map[range.end];
        out.record_stage(*stage, lo..hi);
    }
    out.set_final_labels(c.final_labels().to_vec());
    Ok(out)
}

fn lower_gate(gate: Gate, conn: Connectivity, out: &mut Circuit) -> Result<(), CircuitError> {
    match gate {
        Gate::X { .. }
        | Gate::H { .. }
        | Gate::T { .. }
        | Gate::Tdg { .. }
        | Gate::Ry { .. }
        | Gate::Cnot { .. }
        | Gate::MeasureZ { .. } => out.push(gate),
        Gate::Swap { a, b } => {
            out.push(Gate::Cnot { control: a, target: b })?;
            out.push(Gate::Cnot { control: b, target: a })?;
            out.push(Gate::Cnot { control: a, target: b })
        }
        Gate::Fswap { a, b } => {
            // SWAP then CZ; the CZ is a Hadamard-conjugated CNOT.
            out.push(Gate::Cnot { control: a, target: b })?;
            out.push(Gate::Cnot { control: b, target: a })?;
            out.push(Gate::Cnot { control: a, target: b })?;
            out.push(Gate::H { q: a })?;
            out.push(Gate::Cnot { control: b, target: a })?;
            out.push(Gate::H { q: a })
        }
        Gate::CRy { control, target, angle } => {
            out.push(Gate::Ry { q: target, angle: angle / 2.0 })?;
            out.push(Gate::Cnot { control, target })?;
            out.push(Gate::Ry { q: target, angle: -angle / 2.0 })?;
            out.push(Gate::Cnot { control, target })
        }
        Gate::CCRy { control1, control2, target, angle } => {
            out.push(Gate::Ry { q: target, angle: angle / 2.0 })?;
            toffoli(control1, control2, target, conn, out)?;
            out.push(Gate::Ry { q: target, angle: -angle / 2.0 })?;
            toffoli(control1, control2, target, conn, out)
        }
    }
}

fn toffoli(
    c1: usize,
    c2: usize,
    t: usize,
    conn: Connectivity,
    out: &mut Circuit,
) -> Result<(), CircuitError> {
    match conn {
        Connectivity::AllToAll => toffoli_all_to_all(c1, c2, t, out),
        Connectivity::Linear => {
            if c2 != c1 + 1 || t != c2 + 1 {
                return Err(CircuitError::AdjacencyRequired(format!(
                    "({c1}, {c2}, {t})"
                )));
            }
            toffoli_linear(c1, c2, t, out)
        }
    }
}

/// Standard 6-CNOT decomposition.
fn toffoli_all_to_all(
    c1: usize,
    c2: usize,
    t: usize,
    out: &mut Circuit,
) -> Result<(), CircuitError> {
    out.push(Gate::H { q: t })?;
    out.push(Gate::Cnot { control: c2, target: t })?;
    out.push(Gate::Tdg { q: t })?;
    out.push(Gate::Cnot { control: c1, target: t })?;
    out.push(Gate::T { q: t })?;
    out.push(Gate::Cnot { control: c2, target: t })?;
    out.push(Gate::Tdg { q: t })?;
    out.push(Gate::Cnot { control: c1, target: t })?;
    out.push(Gate::T { q: c2 })?;
    out.push(Gate::T { q: t })?;
    out.push(Gate::Cnot { control: c1, target: c2 })?;
    out.push(Gate::H { q: t })?;
    out.push(Gate::T { q: c1 })?;
    out.push(Gate::Tdg { q: c2 })?;
    out.push(Gate::Cnot { control: c1, target: c2 })
}

/// Adjacency-respecting variant on consecutive lines (c1, c2, t): the
/// target-heavy first half runs with c2 and t swapped so every CNOT is
/// nearest-neighbor.
fn toffoli_linear(c1: usize, c2: usize, t: usize, out: &mut Circuit) -> Result<(), CircuitError> {
    out.push(Gate::Cnot { control: c2, target: t })?;
    out.push(Gate::Cnot { control: t, target: c2 })?;
    out.push(Gate::Cnot { control: c2, target: t })?;
    out.push(Gate::H { q: c2 })?;
    out.push(Gate::Cnot { control: t, target: c2 })?;
    out.push(Gate::Tdg { q: c2 })?;
    out.push(Gate::Cnot { control: c1, target: c2 })?;
    out.push(Gate::T { q: c2 })?;
    out.push(Gate::Cnot { control: t, target: c2 })?;
    out.push(Gate::Tdg { q: c2 })?;
    out.push(Gate::Cnot { control: c1, target: c2 })?;
    out.push(Gate::Cnot { control: c2, target: t })?;
    out.push(Gate::Cnot { control: t, target: c2 })?;
    out.push(Gate::Cnot { control: c2, target: t })?;
    out.push(Gate::T { q: c2 })?;
    out.push(Gate::T { q: t })?;
    out.push(Gate::Cnot { control: c1, target: c2 })?;
    out.push(Gate::H { q: t })?;
    out.push(Gate::T { q: c1 })?;
    out.push(Gate::Tdg { q: c2 })?;
    out.push(Gate::Cnot { control: c1, target: c2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Stage;

    fn cnots(c: &Circuit) -> usize {
        c.gates().iter().filter(|g| g.is_cnot()).count()
    }

    #[test]
    fn test_budgets() {
        let mut c = Circuit::new(3, Connectivity::AllToAll);
        c.push(Gate::Swap { a: 0, b: 1 }).unwrap();
        assert_eq!(cnots(&lower(&c).unwrap()), 3);

        let mut c = Circuit::new(2, Connectivity::AllToAll);
        c.push(Gate::Fswap { a: 0, b: 1 }).unwrap();
        assert_eq!(cnots(&lower(&c).unwrap()), 4);

        let mut c = Circuit::new(2, Connectivity::AllToAll);
        c.push(Gate::CRy { control: 0, target: 1, angle: 0.3 }).unwrap();
        assert_eq!(cnots(&lower(&c).unwrap()), 2);

        let mut c = Circuit::new(3, Connectivity::AllToAll);
        c.push(Gate::CCRy { control1: 0, control2: 1, target: 2, angle: 0.3 })
            .unwrap();
        assert_eq!(cnots(&lower(&c).unwrap()), 12);

        let mut c = Circuit::new(3, Connectivity::Linear);
        c.push(Gate::CCRy { control1: 0, control2: 1, target: 2, angle: 0.3 })
            .unwrap();
        assert_eq!(cnots(&lower(&c).unwrap()), 24);
    }

    #[test]
    fn test_lowered_is_macro_free_and_adjacent() {
        let mut c = Circuit::new(3, Connectivity::Linear);
        c.push(Gate::Fswap { a: 1, b: 2 }).unwrap();
        c.push(Gate::CCRy { control1: 0, control2: 1, target: 2, angle: 1.1 })
            .unwrap();
        let low = lower(&c).unwrap();
        assert!(low.gates().iter().all(|g| !g.is_macro()));
        low.audit_connectivity().unwrap();
        assert_eq!(low.final_labels(), c.final_labels());
    }

    #[test]
    fn test_nonadjacent_linear_toffoli_rejected() {
        let mut c = Circuit::new(4, Connectivity::Linear);
        c.push(Gate::CCRy { control1: 0, control2: 1, target: 3, angle: 0.2 })
            .unwrap();
        assert!(matches!(
            lower(&c),
            Err(CircuitError::AdjacencyRequired(_))
        ));
    }

    #[test]
    fn test_stage_ranges_remap() {
        let mut c = Circuit::new(3, Connectivity::AllToAll);
        let s = c.len();
        c.push(Gate::X { q: 0 }).unwrap();
        c.mark_stage(Stage::Prep, s);
        let s = c.len();
        c.push(Gate::Swap { a: 0, b: 1 }).unwrap();
        c.push(Gate::Swap { a: 1, b: 2 }).unwrap();
        c.mark_stage(Stage::AncillaRoute, s);
        let low = lower(&c).unwrap();
        assert_eq!(low.stages()[0].1, 0..1);
        assert_eq!(low.stages()[1].1, 1..7);
    }
}
