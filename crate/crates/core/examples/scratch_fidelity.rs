//! Scratch: MF vs psi0 fidelity crossover (dev aid, not part of the suite).

use gwf_core::basis::FockBasis;
use gwf_core::gutzwiller;
use gwf_core::meanfield::{hf_ground_state, hf_state_vector};
use gwf_core::model::ModelSpec;
use gwf_core::reference::{single_particle_modes, slater_amplitudes};
use gwf_core::solver::ground_state;

fn main() {
    for n in [8usize, 10, 12] {
        for u in [2.0, 3.0, 5.0, 10.0] {
            let spec = ModelSpec::half_filled_chain(n, u).unwrap();
            let basis = FockBasis::enumerate(&spec).unwrap();
            let h = gwf_core::SparseHamiltonian::build(&spec, &basis).unwrap();
            let t0 = std::time::Instant::now();
            let exact = ground_state(&h, 1e-10, 2000).unwrap();
            let t_solve = t0.elapsed().as_secs_f64();
            let ob = single_particle_modes(&spec);
            let psi0 = slater_amplitudes(&ob, &spec, &basis).unwrap();
            let hf = hf_ground_state(&spec, 50, 1234).unwrap();
            let mf = hf_state_vector(&hf, &basis).unwrap();
            let f0 = gutzwiller::fidelity(&psi0, &exact.state).unwrap();
            let fmf = gutzwiller::fidelity(&mf, &exact.state).unwrap();
            let e_hf = hf.energy;
            println!(
                "N={n:2} U/t={u:5.1} dim={:7} | f_psi0={f0:.6} f_mf={fmf:.6} | 1/f0={:.3} 1/fmf={:.3} | E_hf={e_hf:.6} E_ex={:.6} | lanczos {t_solve:.1}s it={}",
                basis.dimension(),
                1.0 / f0,
                1.0 / fmf,
                exact.energy,
                exact.iterations,
            );
        }
    }
}
