//! Property suites tying the classical modules together: variational
//! bounds, fidelity orderings, monotonicity of the optimal projector
//! strength, and the imaginary-time success curve against a propagator
//! oracle.

use gwf_core::basis::FockBasis;
use gwf_core::gutzwiller::{self, optimize_g};
use gwf_core::meanfield::{hf_ground_state, hf_state_vector};
use gwf_core::model::ModelSpec;
use gwf_core::reference::{single_particle_modes, slater_amplitudes};
use gwf_core::solver::{self, ground_state, ground_state_dense};
use gwf_core::{SectorState, SparseHamiltonian};
use nalgebra::DMatrix;
use std::sync::Arc;

fn setup(n: usize, u: f64) -> (ModelSpec, Arc<FockBasis>, SparseHamiltonian, SectorState) {
    let spec = ModelSpec::half_filled_chain(n, u).unwrap();
    let basis = FockBasis::enumerate(&spec).unwrap();
    let h = SparseHamiltonian::build(&spec, &basis).unwrap();
    let ob = single_particle_modes(&spec);
    let psi0 = slater_amplitudes(&ob, &spec, &basis).unwrap();
    (spec, basis, h, psi0)
}

#[test]
fn u0_ground_energy_is_filled_fermi_sea() {
    for (n, n_up, n_down) in [(4usize, 2usize, 2usize), (4, 2, 1), (5, 2, 2), (6, 3, 3)] {
        let spec = ModelSpec::new(
            n,
            1.0,
            0.0,
            gwf_core::Boundary::Open,
            n_up,
            n_down,
        )
        .unwrap();
        let basis = FockBasis::enumerate(&spec).unwrap();
        let h = SparseHamiltonian::build(&spec, &basis).unwrap();
        let gs = ground_state(&h, 1e-10, 2000).unwrap();
        let ob = single_particle_modes(&spec);
        let sea: f64 = ob.energies[..n_up].iter().sum::<f64>()
            + ob.energies[..n_down].iter().sum::<f64>();
        assert!(
            (gs.energy - sea).abs() < 1e-10,
            "N={n} ({n_up},{n_down}): {} vs {sea}",
            gs.energy
        );
    }
}

#[test]
fn psi0_fidelity_tends_to_one_at_weak_coupling() {
    for n in [2usize, 4, 6, 8] {
        let (_, _, h, psi0) = setup(n, 1e-6);
        let gs = ground_state(&h, 1e-10, 2000).unwrap();
        let f = gutzwiller::fidelity(&psi0, &gs.state).unwrap();
        assert!(f >= 0.999999, "N={n}: fidelity {f}");
    }
}

#[test]
fn g_opt_nondecreasing_in_u() {
    // N=4 on the integer grid, N=6 on a coarser one.
    let mut last = -1.0;
    for k in 0..=50 {
        let (_, _, h, psi0) = setup(4, k as f64);
        let opt = optimize_g(&psi0, &h).unwrap();
        assert!(
            opt.g_opt >= last - 1e-6,
            "U/t={k}: g_opt {} after {last}",
            opt.g_opt
        );
        last = opt.g_opt;
    }
    let mut last6 = -1.0;
    for u in [0.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0] {
        let (_, _, h, psi0) = setup(6, u);
        let opt = optimize_g(&psi0, &h).unwrap();
        assert!(opt.g_opt >= last6 - 1e-6, "U/t={u}");
        last6 = opt.g_opt;
    }
}

#[test]
fn gwf_fidelity_dominates_reference_fidelity() {
    for n in [2usize, 4, 6] {
        for u in [0.0, 1.0, 5.0, 10.0, 50.0] {
            let (_, _, h, psi0) = setup(n, u);
            let exact = ground_state(&h, 1e-10, 2000).unwrap();
            let opt = optimize_g(&psi0, &h).unwrap();
            let f_ref = gutzwiller::fidelity(&psi0, &exact.state).unwrap();
            let f_gwf = gutzwiller::fidelity(&opt.state, &exact.state).unwrap();
            assert!(
                f_gwf >= f_ref - 1e-12,
                "N={n} U={u}: {f_gwf} < {f_ref}"
            );
        }
    }
}

#[test]
fn variational_sandwich_full_stack() {
    // E_exact ≤ E(GWF) ≤ E(ψ0) and E_exact ≤ E_HF; no ordering is asserted
    // between the GWF and HF energies.
    for n in [4usize, 6] {
        for u in [1.0, 10.0, 30.0] {
            let (spec, basis, h, psi0) = setup(n, u);
            let exact = ground_state_dense(&h).unwrap();
            let opt = optimize_g(&psi0, &h).unwrap();
            let e_ref = h.rayleigh_quotient(&psi0).unwrap();
            let hf = hf_ground_state(&spec, 20, 9).unwrap();
            assert!(exact.energy <= opt.energy + 1e-10, "N={n} U={u}");
            assert!(opt.energy <= e_ref + 1e-10, "N={n} U={u}");
            assert!(exact.energy <= hf.energy + 1e-10, "N={n} U={u}");
            let mf = hf_state_vector(&hf, &basis).unwrap();
            let e_mf = h.rayleigh_quotient(&mf).unwrap();
            assert!(
                (e_mf - hf.energy).abs() < 1e-8,
                "determinant energy consistency: {e_mf} vs {}",
                hf.energy
            );
        }
    }
}

#[test]
fn meanfield_ordering_at_strong_coupling() {
    // The energy-selected unrestricted determinant is fully polarized at
    // strong coupling; its overlap with the exact ground state overtakes
    // ψ0's once both N and U/t are large (here N=10, U/t=10). At U → 0 the
    // mean field reduces to ψ0 and the fidelities coincide.
    let (spec, basis, h, psi0) = setup(10, 10.0);
    let exact = ground_state(&h, 1e-10, 2000).unwrap();
    let hf = hf_ground_state(&spec, 30, 13).unwrap();
    let mf = hf_state_vector(&hf, &basis).unwrap();
    let f_mf = gutzwiller::fidelity(&mf, &exact.state).unwrap();
    let f_psi0 = gutzwiller::fidelity(&psi0, &exact.state).unwrap();
    assert!(
        f_mf >= f_psi0 - 1e-9,
        "N=10 U=10: MF fidelity {f_mf} < psi0 fidelity {f_psi0}"
    );

    let n = 8usize;
    let (_, basis, h, psi0) = setup(n, 1e-9);
    let exact = ground_state(&h, 1e-10, 2000).unwrap();
    let spec8 = ModelSpec::half_filled_chain(n, 1e-9).unwrap();
    let hf = hf_ground_state(&spec8, 10, 13).unwrap();
    let mf = hf_state_vector(&hf, &basis).unwrap();
    let f_mf = gutzwiller::fidelity(&mf, &exact.state).unwrap();
    let f_psi0 = gutzwiller::fidelity(&psi0, &exact.state).unwrap();
    assert!((f_mf - f_psi0).abs() < 1e-6, "at U→0 the curves coincide");
}

#[test]
#[ignore = "needs ~1 min: N=12 sector (dim 853776)"]
fn meanfield_ordering_at_n12() {
    let (spec, basis, h, psi0) = setup(12, 10.0);
    let exact = ground_state(&h, 1e-10, 2000).unwrap();
    let hf = hf_ground_state(&spec, 30, 13).unwrap();
    assert!(hf.energy >= exact.energy - 1e-9, "variational bound at N=12");
    let mf = hf_state_vector(&hf, &basis).unwrap();
    let f_mf = gutzwiller::fidelity(&mf, &exact.state).unwrap();
    let f_psi0 = gutzwiller::fidelity(&psi0, &exact.state).unwrap();
    assert!(f_mf >= f_psi0 - 1e-9, "{f_mf} vs {f_psi0}");
}

/// Matrix exponential by scaling and squaring with a Taylor kernel; the
/// independent propagator path for the imaginary-time curve.
fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = m / 2f64.powi(s as i32);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut acc = DMatrix::<f64>::identity(n, n);
    for k in 1..200 {
        term = (&term * &a) / k as f64;
        acc += &term;
        let t_norm = term.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
        if t_norm < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

#[test]
fn qite_curve_matches_propagator_oracle() {
    let (_, _, h, psi0) = setup(4, 10.0);
    let taus: Vec<f64> = vec![0.0, 0.05, 0.1, 0.3, 0.7, 1.5, 3.0];
    let curve = gutzwiller::qite_success_curve(&psi0, &h, &taus).unwrap();

    let dense = h.to_dense();
    let exact = ground_state_dense(&h).unwrap();
    let trial: Vec<f64> = psi0.amplitudes().iter().map(|a| a.re).collect();
    for (&tau, &p) in taus.iter().zip(&curve) {
        let prop = expm(&(-tau * &dense));
        let evolved = &prop * DMatrix::from_column_slice(trial.len(), 1, &trial);
        let mut dot = 0.0f64;
        let mut nrm = 0.0f64;
        for i in 0..trial.len() {
            dot += exact.state.amplitudes()[i].re * evolved[(i, 0)];
            nrm += evolved[(i, 0)] * evolved[(i, 0)];
        }
        let oracle = dot * dot / nrm;
        assert!(
            (p - oracle).abs() < 1e-9,
            "tau={tau}: spectral {p} vs propagator {oracle}"
        );
    }
    // Long-time limit approaches 1 for the nondegenerate gap.
    let tail = gutzwiller::qite_success_curve(&psi0, &h, &[50.0]).unwrap();
    assert!((tail[0] - 1.0).abs() < 1e-6);
}

#[test]
fn lanczos_solves_match_dense_through_n6() {
    for n in [2usize, 4, 6] {
        for u in [0.0, 1.0, 10.0] {
            let (_, _, h, _) = setup(n, u);
            let a = ground_state(&h, 1e-10, 2000).unwrap();
            let b = ground_state_dense(&h).unwrap();
            assert!((a.energy - b.energy).abs() < 1e-9, "N={n} U={u}");
            assert!(a.residual_norm <= 1e-10);
        }
    }
    let _ = solver::DENSE_CAP;
}
