//! Scratch: which mean-field convention reproduces the N=10 overlap table?

use gwf_core::basis::FockBasis;
use gwf_core::gutzwiller::{self, optimize_g};
use gwf_core::meanfield::{hf_ground_state_with, hf_state_vector, HfOptions};
use gwf_core::model::ModelSpec;
use gwf_core::reference::{single_particle_modes, slater_amplitudes, slater_determinant_state};
use gwf_core::solver::ground_state;
use num_complex::Complex64;
use std::sync::Arc;

fn main() {
    let n = 10usize;
    let u = 10.0;
    let spec = ModelSpec::half_filled_chain(n, u).unwrap();
    let basis = FockBasis::enumerate(&spec).unwrap();
    let h = gwf_core::SparseHamiltonian::build(&spec, &basis).unwrap();
    let exact = ground_state(&h, 1e-10, 2000).unwrap();
    println!("exact energy {}", exact.energy);

    // (a) unrestricted HF at full coupling
    let hf = hf_ground_state_with(&spec, 50, 1234, &HfOptions::default()).unwrap();
    let mf = hf_state_vector(&hf, &basis).unwrap();
    let f = gutzwiller::fidelity(&mf, &exact.state).unwrap();
    println!("UHF:          E={:.6} f={f:.6} 1/f={:.3}", hf.energy, 1.0 / f);
    println!("  densities_up = {:?}", &hf.densities_up);

    // (b) half-strength potential: solve HF for U/2, overlap vs exact(U)
    let spec_half = ModelSpec::half_filled_chain(n, u / 2.0).unwrap();
    let hf2 = hf_ground_state_with(&spec_half, 50, 1234, &HfOptions::default()).unwrap();
    let mf2 = hf_state_vector(&hf2, &basis).unwrap();
    let f2 = gutzwiller::fidelity(&mf2, &exact.state).unwrap();
    println!("UHF(U/2 pot): f={f2:.6} 1/f={:.3}", 1.0 / f2);

    // (c) symmetrized pair of the two Néel solutions: flip spin pattern
    let flipped = {
        let occ_up = hf.orbitals_down.columns(0, 5).into_owned();
        let occ_dn = hf.orbitals_up.columns(0, 5).into_owned();
        let mut s = slater_determinant_state(&occ_up, &occ_dn, &basis).unwrap();
        s.normalize();
        s
    };
    let s_ab = mf.dot(&flipped).unwrap();
    let amps: Vec<Complex64> = mf
        .amplitudes()
        .iter()
        .zip(flipped.amplitudes())
        .map(|(a, b)| a + b)
        .collect();
    let mut sym = gwf_core::SectorState::from_amplitudes(Arc::clone(&basis), amps).unwrap();
    sym.normalize();
    let f3 = gutzwiller::fidelity(&sym, &exact.state).unwrap();
    println!(
        "Néel A+B sym: overlap_AB={:.4} f={f3:.6} 1/f={:.3}",
        s_ab.re,
        1.0 / f3
    );

    // (d) staggered-field scan: max-overlap polarized determinant
    let hop = gwf_core::reference::hopping_matrix(&spec);
    let mut best = (0.0f64, 0.0f64);
    for k in 0..=60 {
        let field = 0.1 * k as f64;
        let mut hu = hop.clone();
        let mut hd = hop.clone();
        for i in 0..n {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            hu[(i, i)] -= field * s;
            hd[(i, i)] += field * s;
        }
        let eu = hu.symmetric_eigen();
        let ed = hd.symmetric_eigen();
        let sort_cols = |eig: &nalgebra::SymmetricEigen<f64, nalgebra::Dyn>| {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
            let mut m = nalgebra::DMatrix::<f64>::zeros(n, 5);
            for (c, &idx) in order.iter().take(5).enumerate() {
                for r in 0..n {
                    m[(r, c)] = eig.eigenvectors[(r, idx)];
                }
            }
            m
        };
        let occ_up = sort_cols(&eu);
        let occ_dn = sort_cols(&ed);
        let mut s = slater_determinant_state(&occ_up, &occ_dn, &basis).unwrap();
        s.normalize();
        let f = gutzwiller::fidelity(&s, &exact.state).unwrap();
        if f > best.1 {
            best = (field, f);
        }
    }
    println!("best staggered field {}: f={:.6} 1/f={:.3}", best.0, best.1, 1.0 / best.1);

    // GWF numbers at N=10, U/t=10
    let ob = single_particle_modes(&spec);
    let psi0 = slater_amplitudes(&ob, &spec, &basis).unwrap();
    let opt = optimize_g(&psi0, &h).unwrap();
    let f_gwf = gutzwiller::fidelity(&opt.state, &exact.state).unwrap();
    println!(
        "GWF: g_opt={:.6} P={:.6} reps={:.3} f={:.6} 1/f={:.4} reps*1/f={:.3}",
        opt.g_opt,
        opt.success_prob,
        opt.repetitions,
        f_gwf,
        1.0 / f_gwf,
        opt.repetitions / f_gwf
    );
}
