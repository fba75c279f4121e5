//! Reference-state preparation circuit.
//!
//! Stage 1 (prep): X gates create the spin-polarized reference determinants
//! in the mode (energy-ordered) basis, then one Givens network per spin
//! rotates to the site basis. Each two-mode rotation costs 4 CNOTs: a CNOT
//! sandwich around a two-CNOT controlled-Ry. Stage 2 (reorder): a triangle
//! of N(N−1)/2 fermionic SWAPs interleaves the two spin blocks so the two
//! qubits of each site are adjacent.

use crate::circuit::{Circuit, Connectivity, Stage};
use crate::error::CircuitError;
use crate::gate::Gate;
use crate::givens::givens_decompose;
use crate::projection::build_projection_circuit;
use gwf_core::{ModelSpec, OrbitalBasis};

/// Width-2N circuit preparing the noninteracting ground state in the
/// site-interleaved Jordan-Wigner ordering.
pub fn build_prep_circuit(
    spec: &ModelSpec,
    orbitals: &OrbitalBasis,
    connectivity: Connectivity,
) -> Result<Circuit, CircuitError> {
    spec.validate()?;
    let n = spec.n_sites;
    if orbitals.orbitals.nrows() != n {
        return Err(CircuitError::WidthMismatch {
            expected: n,
            got: orbitals.orbitals.nrows(),
        });
    }
    let mut c = Circuit::with_labels(
        2 * n,
        connectivity,
        Circuit::spin_blocked_labels(n, false),
    )?;

    // Stage 1: reference determinants + Givens networks, one per spin block.
    let start = c.len();
    for q in 0..spec.n_up {
        c.push(Gate::X { q })?;
    }
    for q in 0..spec.n_down {
        c.push(Gate::X { q: n + q })?;
    }
    let dec_up = givens_decompose(orbitals, spec.n_up)?;
    let dec_down = if spec.n_down == spec.n_up {
        dec_up.clone()
    } else {
        givens_decompose(orbitals, spec.n_down)?
    };
    for (offset, dec) in [(0usize, &dec_up), (n, &dec_down)] {
        for rot in &dec.rotations {
            let a = offset + rot.line;
            let b = a + 1;
            c.push(Gate::Cnot { control: b, target: a })?;
            c.push(Gate::CRy { control: a, target: b, angle: 2.0 * rot.angle })?;
            c.push(Gate::Cnot { control: b, target: a })?;
        }
    }
    if dec_up.negate_state ^ dec_down.negate_state {
        // Ry(2π) = −1 on the full register: fixes the determinant's
        // global sign without any two-qubit cost.
        c.push(Gate::Ry { q: 0, angle: 2.0 * std::f64::consts::PI })?;
    }
    c.mark_stage(Stage::Prep, start);

    // Stage 2: interleave spins by site. Layer t swaps the pairs
    // (N + 2k − t − 2, N + 2k − t − 1), k = 1..=t.
    let start = c.len();
    for t in 1..n {
        for k in 1..=t {
            let a = n + 2 * k - t - 2;
            c.push(Gate::Fswap { a, b: a + 1 })?;
        }
    }
    c.mark_stage(Stage::Reorder, start);

    debug_assert_eq!(
        c.final_labels(),
        Circuit::interleaved_labels(n, false).as_slice(),
        "reorder network must interleave the register by site"
    );
    Ok(c)
}

/// Full pipeline on 3N lines: preparation, then the non-deterministic
/// projection with its ancilla register.
pub fn build_gwf_circuit(
    spec: &ModelSpec,
    orbitals: &OrbitalBasis,
    g: f64,
    connectivity: Connectivity,
) -> Result<Circuit, CircuitError> {
    let n = spec.n_sites;
    let mut full = Circuit::with_labels(
        3 * n,
        connectivity,
        Circuit::spin_blocked_labels(n, true),
    )?;
    let prep = build_prep_circuit(spec, orbitals, connectivity)?;
    full.absorb(&prep)?;
    let projection = build_projection_circuit(spec, g, connectivity)?;
    // The projection assumes the interleaved layout the prep just produced.
    full.absorb(&projection)?;
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::QubitLabel;
    use gwf_core::reference::single_particle_modes;

    fn chain(n: usize) -> (ModelSpec, OrbitalBasis) {
        let spec = ModelSpec::half_filled_chain(n, 0.0).unwrap();
        let ob = single_particle_modes(&spec);
        (spec, ob)
    }

    #[test]
    fn test_reorder_interleaves_labels() {
        for n in [2usize, 4, 6] {
            let (spec, ob) = chain(n);
            let c = build_prep_circuit(&spec, &ob, Connectivity::Linear).unwrap();
            assert_eq!(c.final_labels(), Circuit::interleaved_labels(n, false).as_slice());
        }
    }

    #[test]
    fn test_fswap_count_matches_triangle() {
        for n in [2usize, 4, 6, 8] {
            let (spec, ob) = chain(n);
            let c = build_prep_circuit(&spec, &ob, Connectivity::Linear).unwrap();
            let fswaps = c
                .gates()
                .iter()
                .filter(|g| matches!(g, Gate::Fswap { .. }))
                .count();
            assert_eq!(fswaps, n * (n - 1) / 2, "N={n}");
        }
    }

    #[test]
    fn test_x_gates_match_filling() {
        let spec = ModelSpec::new(4, 1.0, 0.0, gwf_core::Boundary::Open, 1, 3).unwrap();
        let ob = single_particle_modes(&spec);
        let c = build_prep_circuit(&spec, &ob, Connectivity::Linear).unwrap();
        let xs: Vec<usize> = c
            .gates()
            .iter()
            .filter_map(|g| match g {
                Gate::X { q } => Some(*q),
                _ => None,
            })
            .collect();
        assert_eq!(xs, vec![0, 4, 5, 6]);
    }

    #[test]
    fn test_stages_cover_all_gates() {
        let (spec, ob) = chain(4);
        let c = build_prep_circuit(&spec, &ob, Connectivity::Linear).unwrap();
        assert_eq!(c.stages().len(), 2);
        assert_eq!(c.stages()[0].0, Stage::Prep);
        assert_eq!(c.stages()[1].0, Stage::Reorder);
        assert_eq!(c.stages()[1].1.end, c.len());
        // Prep gates only touch within-block adjacent pairs.
        c.audit_connectivity().unwrap();
    }

    #[test]
    fn test_full_pipeline_label_roundtrip() {
        let (spec, ob) = chain(4);
        let full = build_gwf_circuit(&spec, &ob, 0.5, Connectivity::Linear).unwrap();
        assert_eq!(full.width(), 12);
        // After route + ccU + unroute, the system lines carry the
        // interleaved labels and the ancillas are back home.
        let labels = full.final_labels();
        for site in 0..4 {
            assert_eq!(
                labels[2 * site],
                QubitLabel::Site { site, spin: crate::gate::Spin::Up }
            );
            assert_eq!(labels[8 + site], QubitLabel::Ancilla { site });
        }
        assert_eq!(full.stages().len(), 5);
    }
}
