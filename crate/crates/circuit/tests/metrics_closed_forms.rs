//! Exact integer resource identities for the compiled circuits:
//! preparation: 4N²−2N CNOTs (half filling), depth 8N−8;
//! projection (linear): 6N²+18N CNOTs, depth 12N+12;
//! projection (all-to-all): 12N CNOTs, depth 12.

use gwf_circuit::circuit::{Connectivity, Stage};
use gwf_circuit::metrics::metrics;
use gwf_circuit::prep::{build_gwf_circuit, build_prep_circuit};
use gwf_circuit::projection::build_projection_circuit;
use gwf_core::model::{Boundary, ModelSpec};
use gwf_core::reference::single_particle_modes;

#[test]
fn prep_closed_forms_even_chains() {
    for n in [2usize, 4, 6, 8, 10, 12] {
        let spec = ModelSpec::half_filled_chain(n, 0.0).unwrap();
        let ob = single_particle_modes(&spec);
        let c = build_prep_circuit(&spec, &ob, Connectivity::Linear).unwrap();
        let m = metrics(&c).unwrap();
        assert_eq!(m.cnot_count, 4 * n * n - 2 * n, "prep CNOTs at N={n}");
        assert_eq!(m.cnot_depth, 8 * n - 8, "prep depth at N={n}");
        assert_eq!(m.width, 2 * n);
        // Stage split: Givens networks 2N², reordering 2N(N−1).
        assert_eq!(m.stage(Stage::Prep).unwrap().cnot_count, 2 * n * n);
        assert_eq!(m.stage(Stage::Reorder).unwrap().cnot_count, 2 * n * (n - 1));
        assert_eq!(m.stage(Stage::Prep).unwrap().cnot_depth, 4 * (n - 1));
        assert_eq!(m.stage(Stage::Reorder).unwrap().cnot_depth, 4 * (n - 1));
    }
}

#[test]
fn prep_closed_form_generic_filling() {
    // 8·[n↑(N−n↑) + n↓(N−n↓)]/2 + 2N(N−1) CNOTs, depth 8N−8 at any filling.
    let spec = ModelSpec::new(5, 1.0, 0.0, Boundary::Open, 2, 3).unwrap();
    let ob = single_particle_modes(&spec);
    let c = build_prep_circuit(&spec, &ob, Connectivity::Linear).unwrap();
    let m = metrics(&c).unwrap();
    let givens = 4 * (2 * (5 - 2) + 3 * (5 - 3));
    assert_eq!(m.cnot_count, givens + 2 * 5 * 4);
    assert_eq!(m.cnot_depth, 8 * 5 - 8);
}

#[test]
fn projection_closed_forms_even_chains() {
    for n in [2usize, 4, 6, 8, 10, 12] {
        let spec = ModelSpec::half_filled_chain(n, 1.0).unwrap();
        let c = build_projection_circuit(&spec, 0.5, Connectivity::Linear).unwrap();
        let m = metrics(&c).unwrap();
        assert_eq!(m.cnot_count, 6 * n * n + 18 * n, "projection CNOTs at N={n}");
        assert_eq!(m.cnot_depth, 12 * n + 12, "projection depth at N={n}");
        assert_eq!(m.width, 3 * n);
        // Routing is 3N(N−1) CNOTs each way; the ccU column costs 24N.
        assert_eq!(
            m.stage(Stage::AncillaRoute).unwrap().cnot_count,
            3 * n * (n - 1)
        );
        assert_eq!(
            m.stage(Stage::AncillaUnroute).unwrap().cnot_count,
            3 * n * (n - 1)
        );
        assert_eq!(m.stage(Stage::CcU).unwrap().cnot_count, 24 * n);
        assert_eq!(m.stage(Stage::CcU).unwrap().cnot_depth, 24);
        assert_eq!(
            m.stage(Stage::AncillaRoute).unwrap().cnot_depth,
            6 * (n - 1)
        );
    }
}

#[test]
fn projection_all_to_all_forms() {
    for n in [2usize, 4, 6] {
        let spec = ModelSpec::half_filled_chain(n, 1.0).unwrap();
        let c = build_projection_circuit(&spec, 0.5, Connectivity::AllToAll).unwrap();
        let m = metrics(&c).unwrap();
        assert_eq!(m.cnot_count, 12 * n);
        assert_eq!(m.cnot_depth, 12);
    }
}

#[test]
fn full_pipeline_totals() {
    let n = 10usize;
    let spec = ModelSpec::half_filled_chain(n, 10.0).unwrap();
    let ob = single_particle_modes(&spec);
    let full = build_gwf_circuit(&spec, &ob, 0.8, Connectivity::Linear).unwrap();
    let m = metrics(&full).unwrap();
    assert_eq!(m.cnot_count, (4 * n * n - 2 * n) + (6 * n * n + 18 * n));
    assert_eq!(m.cnot_depth, (8 * n - 8) + (12 * n + 12));
    assert_eq!(m.per_stage.len(), 5);
    let total_from_stages: usize = m.per_stage.iter().map(|s| s.cnot_count).sum();
    assert_eq!(total_from_stages, m.cnot_count);
}

#[test]
fn depth_never_exceeds_count() {
    for n in [2usize, 4, 6] {
        let spec = ModelSpec::half_filled_chain(n, 1.0).unwrap();
        let ob = single_particle_modes(&spec);
        for conn in [Connectivity::Linear, Connectivity::AllToAll] {
            let c = build_gwf_circuit(&spec, &ob, 0.3, conn).unwrap();
            let m = metrics(&c).unwrap();
            assert!(m.cnot_depth <= m.cnot_count);
        }
    }
}
