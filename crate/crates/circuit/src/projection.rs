//! Non-deterministic projection circuit.
//!
//! One ancilla per site receives a doubly-controlled Ry(α(g)) from the two
//! site qubits; measuring every ancilla in |0⟩ certifies the projection.
//! Under linear connectivity a SWAP pipeline first parks each ancilla below
//! its site pair (Aᵢ travels 2(N−i) steps), the controlled rotations act on
//! disjoint adjacent trios, and the inverse pipeline restores the layout.

use crate::circuit::{Circuit, Connectivity, Stage};
use crate::error::CircuitError;
use crate::gate::Gate;
use gwf_core::ModelSpec;

/// α(g) = 2·arccos(1−g): the Ry angle whose rotation sends |0⟩ to
/// (1−g)|0⟩ + √(2g−g²)|1⟩. Algebraically 2·arctan(√(2g−g²)/(1−g)) on
/// g ∈ [0,1) and π at g = 1, where the arctan form is singular.
pub fn projection_angle(g: f64) -> Result<f64, CircuitError> {
    if !(0.0..=1.0).contains(&g) || !g.is_finite() {
        return Err(CircuitError::ParameterOutOfRange(format!(
            "g must lie in [0,1], got {g}"
        )));
    }
    Ok(2.0 * (1.0 - g).acos())
}

/// Width-3N projection circuit over the site-interleaved system layout
/// (lines 0..2N) plus ancillas (lines 2N..3N), ending in ancilla
/// measurements.
pub fn build_projection_circuit(
    spec: &ModelSpec,
    g: f64,
    connectivity: Connectivity,
) -> Result<Circuit, CircuitError> {
    spec.validate()?;
    let n = spec.n_sites;
    let alpha = projection_angle(g)?;
    let mut c = Circuit::with_labels(
        3 * n,
        connectivity,
        Circuit::interleaved_labels(n, true),
    )?;

    match connectivity {
        Connectivity::AllToAll => {
            c.mark_stage(Stage::AncillaRoute, c.len());
            let start = c.len();
            for site in 0..n {
                c.push(Gate::CCRy {
                    control1: 2 * site,
                    control2: 2 * site + 1,
                    target: 2 * n + site,
                    angle: alpha,
                })?;
            }
            c.mark_stage(Stage::CcU, start);
            c.mark_stage(Stage::AncillaUnroute, c.len());
        }
        Connectivity::Linear => {
            // Route: ancilla i (1-based) starts at line 2N+i−1 and bubbles
            // up 2(N−i) lines to 3i−1. Column t moves every ancilla with
            // i ≤ t that still has distance left; active neighbors stay two
            // lines apart, so each column is a disjoint SWAP layer.
            let route = route_schedule(n);
            let start = c.len();
            for &(a, b) in &route {
                c.push(Gate::Swap { a, b })?;
            }
            c.mark_stage(Stage::AncillaRoute, start);

            let start = c.len();
            for site in 0..n {
                c.push(Gate::CCRy {
                    control1: 3 * site,
                    control2: 3 * site + 1,
                    target: 3 * site + 2,
                    angle: alpha,
                })?;
            }
            c.mark_stage(Stage::CcU, start);

            let start = c.len();
            for &(a, b) in route.iter().rev() {
                c.push(Gate::Swap { a, b })?;
            }
            c.mark_stage(Stage::AncillaUnroute, start);
        }
    }

    debug_assert_eq!(
        c.final_labels(),
        Circuit::interleaved_labels(n, true).as_slice(),
        "route and unroute must cancel"
    );
    for site in 0..n {
        c.push(Gate::MeasureZ { q: 2 * n + site })?;
    }
    Ok(c)
}

/// SWAP columns of the routing pipeline, flattened in execution order.
fn route_schedule(n: usize) -> Vec<(usize, usize)> {
    let mut position: Vec<usize> = (0..n).map(|i| 2 * n + i).collect();
    let mut moved = vec![0usize; n];
    let mut swaps = Vec::with_capacity(n * (n - 1));
    if n < 2 {
        return swaps;
    }
    for t in 1..=2 * (n - 1) {
        for i in 0..n {
            if t >= i + 1 && moved[i] < 2 * (n - 1 - i) {
                let p = position[i];
                swaps.push((p - 1, p));
                position[i] = p - 1;
                moved[i] += 1;
            }
        }
    }
    swaps
}
