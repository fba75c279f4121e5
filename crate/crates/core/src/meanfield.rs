//! Self-consistent Hartree-Fock ground state of the Hubbard chain.
//!
//! The quartic term is decoupled in the density channel only:
//! h_σ = hopping + U·diag(⟨n_{i,−σ}⟩). Collinear, spin-dependent site
//! densities are allowed (unrestricted mode), and the optional restricted
//! mode symmetrizes the spin densities every sweep. Self-consistency is
//! max-norm convergence of the density map; random restarts plus the
//! uniform and Néel initializations guard against local minima.

use crate::basis::FockBasis;
use crate::error::CoreError;
use crate::model::ModelSpec;
use crate::reference::{hopping_matrix, slater_determinant_state};
use crate::state::SectorState;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Debug, Clone, Copy)]
pub struct HfOptions {
    /// Max-norm density change declaring self-consistency.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Linear mixing factor applied to the density update.
    pub mixing: f64,
    /// Force spin-symmetric densities (requires n_up = n_down).
    pub restricted: bool,
}

impl Default for HfOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_sweeps: 10_000,
            mixing: 0.5,
            restricted: false,
        }
    }
}

pub const DEFAULT_RESTARTS: usize = 50;

#[derive(Debug, Clone)]
pub struct HfSolution {
    pub densities_up: Vec<f64>,
    pub densities_down: Vec<f64>,
    /// Orbitals of h_↑ at the converged densities, columns ascending in energy.
    pub orbitals_up: DMatrix<f64>,
    pub orbitals_down: DMatrix<f64>,
    /// Variational energy of the determinant, with the double-counting
    /// correction −U Σ_i ⟨n_{i,↑}⟩⟨n_{i,↓}⟩ relative to the eigenvalue sum.
    pub energy: f64,
    pub converged: bool,
    pub trial_index: usize,
    pub sweeps: usize,
}

impl HfSolution {
    /// Per-site densities as CSV (diagnostics).
    pub fn densities_csv(&self) -> String {
        let mut out = String::from("site,density_up,density_down\n");
        for i in 0..self.densities_up.len() {
            out.push_str(&format!(
                "{},{:.17e},{:.17e}\n",
                i, self.densities_up[i], self.densities_down[i]
            ));
        }
        out
    }
}

/// One self-consistency loop from the given initial densities.
pub fn hf_single_shot(
    spec: &ModelSpec,
    init_up: &[f64],
    init_down: &[f64],
    opts: &HfOptions,
) -> Result<HfSolution, CoreError> {
    spec.validate()?;
    let n = spec.n_sites;
    check_density(init_up, spec.n_up, n, "up")?;
    check_density(init_down, spec.n_down, n, "down")?;
    if opts.restricted && spec.n_up != spec.n_down {
        return Err(CoreError::ParameterOutOfRange(
            "restricted mode requires n_up = n_down".into(),
        ));
    }
    let hop = hopping_matrix(spec);
    let u = spec.hubbard_u;

    let mut d_up = init_up.to_vec();
    let mut d_dn = init_down.to_vec();
    let mut result: Option<(Vec<f64>, Vec<f64>, DMatrix<f64>, DMatrix<f64>)> = None;
    let mut converged = false;
    let mut sweeps = 0usize;

    for sweep in 1..=opts.max_sweeps {
        sweeps = sweep;
        let (orb_up, new_up) = fill_lowest(&hop, &d_dn, u, spec.n_up);
        let (orb_dn, new_dn) = fill_lowest(&hop, &d_up, u, spec.n_down);
        let (new_up, new_dn) = if opts.restricted {
            let avg: Vec<f64> = new_up
                .iter()
                .zip(&new_dn)
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            (avg.clone(), avg)
        } else {
            (new_up, new_dn)
        };
        let delta = d_up
            .iter()
            .zip(&new_up)
            .chain(d_dn.iter().zip(&new_dn))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        result = Some((new_up.clone(), new_dn.clone(), orb_up, orb_dn));
        if delta < opts.tol {
            converged = true;
            break;
        }
        for i in 0..n {
            d_up[i] += opts.mixing * (new_up[i] - d_up[i]);
            d_dn[i] += opts.mixing * (new_dn[i] - d_dn[i]);
        }
    }

    let (dens_up, dens_dn, orb_up, orb_dn) = result.expect("at least one sweep runs");
    let energy = determinant_energy(&hop, u, &orb_up, &orb_dn, spec.n_up, spec.n_down);
    Ok(HfSolution {
        densities_up: dens_up,
        densities_down: dens_dn,
        orbitals_up: orb_up,
        orbitals_down: orb_dn,
        energy,
        converged,
        trial_index: 0,
        sweeps,
    })
}

/// Best converged solution over uniform, Néel and `n_restarts` random
/// initializations. Ties break by lexicographically smallest densities,
/// then by trial index.
pub fn hf_ground_state(
    spec: &ModelSpec,
    n_restarts: usize,
    seed: u64,
) -> Result<HfSolution, CoreError> {
    hf_ground_state_with(spec, n_restarts, seed, &HfOptions::default())
}

pub fn hf_ground_state_with(
    spec: &ModelSpec,
    n_restarts: usize,
    seed: u64,
    opts: &HfOptions,
) -> Result<HfSolution, CoreError> {
    if n_restarts < 1 {
        return Err(CoreError::ParameterOutOfRange("n_restarts must be ≥ 1".into()));
    }
    spec.validate()?;
    let n = spec.n_sites;
    let mut inits: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(n_restarts + 2);
    inits.push((
        uniform_density(n, spec.n_up),
        uniform_density(n, spec.n_down),
    ));
    inits.push(neel_density(n, spec.n_up, spec.n_down));
    for k in 0..n_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        inits.push((
            random_density(n, spec.n_up, &mut rng),
            random_density(n, spec.n_down, &mut rng),
        ));
    }

    let solutions: Vec<HfSolution> = inits
        .par_iter()
        .enumerate()
        .filter_map(|(idx, (iu, id))| {
            hf_single_shot(spec, iu, id, opts).ok().map(|mut s| {
                s.trial_index = idx;
                s
            })
        })
        .filter(|s| s.converged)
        .collect();

    solutions
        .into_iter()
        .min_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap()
                .then_with(|| lex_cmp(&a.densities_up, &b.densities_up))
                .then_with(|| lex_cmp(&a.densities_down, &b.densities_down))
                .then(a.trial_index.cmp(&b.trial_index))
        })
        .ok_or(CoreError::AllTrialsUnconverged)
}

/// Expand the converged determinant into sector amplitudes.
pub fn hf_state_vector(
    sol: &HfSolution,
    basis: &Arc<FockBasis>,
) -> Result<SectorState, CoreError> {
    if !sol.converged {
        return Err(CoreError::ParameterOutOfRange(
            "hf_state_vector needs a converged solution".into(),
        ));
    }
    let occ_up = sol.orbitals_up.columns(0, basis.n_up()).into_owned();
    let occ_dn = sol.orbitals_down.columns(0, basis.n_down()).into_owned();
    let mut state = slater_determinant_state(&occ_up, &occ_dn, basis)?;
    state.normalize();
    Ok(state)
}

fn fill_lowest(
    hop: &DMatrix<f64>,
    opposite_density: &[f64],
    u: f64,
    n_occ: usize,
) -> (DMatrix<f64>, Vec<f64>) {
    let n = hop.nrows();
    let mut h = hop.clone();
    for i in 0..n {
        h[(i, i)] += u * opposite_density[i];
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut orbitals = DMatrix::<f64>::zeros(n, n);
    for (col, &idx) in order.iter().enumerate() {
        // Phase-fix each column for reproducibility.
        let mut pivot = 0usize;
        let mut mag = 0.0f64;
        for r in 0..n {
            let v = eig.eigenvectors[(r, idx)].abs();
            if v > mag {
                mag = v;
                pivot = r;
            }
        }
        let sign = if eig.eigenvectors[(pivot, idx)] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            orbitals[(r, col)] = sign * eig.eigenvectors[(r, idx)];
        }
    }
    let mut density = vec![0.0f64; n];
    for alpha in 0..n_occ {
        for i in 0..n {
            density[i] += orbitals[(i, alpha)] * orbitals[(i, alpha)];
        }
    }
    (orbitals, density)
}

/// Variational energy ⟨det|H|det⟩ of the Slater determinant: kinetic
/// expectation plus U Σ_i n_{i,↑} n_{i,↓}. Equals the eigenvalue sum minus
/// the standard double-counting term at self-consistency.
fn determinant_energy(
    hop: &DMatrix<f64>,
    u: f64,
    orb_up: &DMatrix<f64>,
    orb_dn: &DMatrix<f64>,
    n_up: usize,
    n_down: usize,
) -> f64 {
    let n = hop.nrows();
    let mut kin = 0.0;
    let mut dens_up = vec![0.0f64; n];
    let mut dens_dn = vec![0.0f64; n];
    for (orb, n_occ, dens) in [
        (orb_up, n_up, &mut dens_up),
        (orb_dn, n_down, &mut dens_dn),
    ] {
        for alpha in 0..n_occ {
            let col = orb.column(alpha);
            kin += (hop * col).dot(&col);
            for i in 0..n {
                dens[i] += orb[(i, alpha)] * orb[(i, alpha)];
            }
        }
    }
    let interaction: f64 = dens_up.iter().zip(&dens_dn).map(|(a, b)| u * a * b).sum();
    kin + interaction
}

fn check_density(d: &[f64], total: usize, n: usize, label: &str) -> Result<(), CoreError> {
    if d.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: d.len(),
        });
    }
    if d.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(CoreError::ParameterOutOfRange(format!(
            "{label} densities must lie in [0,1]"
        )));
    }
    let sum: f64 = d.iter().sum();
    if (sum - total as f64).abs() > 1e-6 {
        return Err(CoreError::ParameterOutOfRange(format!(
            "{label} densities sum to {sum}, expected {total}"
        )));
    }
    Ok(())
}

fn uniform_density(n: usize, total: usize) -> Vec<f64> {
    vec![total as f64 / n as f64; n]
}

fn neel_density(n: usize, n_up: usize, n_down: usize) -> (Vec<f64>, Vec<f64>) {
    let mut up: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let mut dn: Vec<f64> = (0..n).map(|i| if i % 2 == 1 { 1.0 } else { 0.0 }).collect();
    rescale_density(&mut up, n_up);
    rescale_density(&mut dn, n_down);
    (up, dn)
}

fn random_density(n: usize, total: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(0.02..0.98)).collect();
    rescale_density(&mut d, total);
    d
}

/// Clamp to [0,1] and redistribute until the total matches.
fn rescale_density(d: &mut [f64], total: usize) {
    let target = total as f64;
    for _ in 0..64 {
        let sum: f64 = d.iter().sum();
        if (sum - target).abs() < 1e-12 {
            break;
        }
        if sum > 0.0 {
            let headroom: f64 = if sum < target {
                d.iter().map(|x| 1.0 - x).sum()
            } else {
                sum
            };
            if headroom <= 0.0 {
                break;
            }
            let excess = target - sum;
            for x in d.iter_mut() {
                let share = if excess > 0.0 { (1.0 - *x) / headroom } else { *x / headroom };
                *x = (*x + excess * share).clamp(0.0, 1.0);
            }
        } else {
            let fill = target / d.len() as f64;
            d.iter_mut().for_each(|x| *x = fill);
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap() {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::single_particle_modes;

    #[test]
    fn test_u0_reduces_to_noninteracting() {
        let spec = ModelSpec::half_filled_chain(6, 0.0).unwrap();
        let sol = hf_ground_state(&spec, 3, 42).unwrap();
        assert!(sol.converged);
        let ob = single_particle_modes(&spec);
        let e0: f64 = 2.0 * ob.energies[..3].iter().sum::<f64>();
        assert!((sol.energy - e0).abs() < 1e-9, "{} vs {e0}", sol.energy);
        // Densities match the Fermi-sea profile.
        for i in 0..6 {
            let mut d = 0.0;
            for alpha in 0..3 {
                d += ob.orbitals[(i, alpha)].powi(2);
            }
            assert!((sol.densities_up[i] - d).abs() < 1e-8);
            assert!((sol.densities_down[i] - d).abs() < 1e-8);
        }
    }

    #[test]
    fn test_symmetric_dimer_fixed_point() {
        // Uniform paramagnetic densities are an exact fixed point of the
        // dimer map; the determinant energy is -2t + U/2.
        for u in [0.1, 0.5, 1.0] {
            let spec = ModelSpec::half_filled_chain(2, u).unwrap();
            let sol =
                hf_single_shot(&spec, &[0.5, 0.5], &[0.5, 0.5], &HfOptions::default()).unwrap();
            assert!(sol.converged);
            assert!(sol.sweeps <= 2);
            let expected = -2.0 + u / 2.0;
            assert!(
                (sol.energy - expected).abs() < 1e-12,
                "u={u}: {} vs {expected}",
                sol.energy
            );
        }
    }

    #[test]
    fn test_density_totals_conserved() {
        let spec = ModelSpec::half_filled_chain(8, 10.0).unwrap();
        let sol = hf_ground_state(&spec, 10, 7).unwrap();
        let su: f64 = sol.densities_up.iter().sum();
        let sd: f64 = sol.densities_down.iter().sum();
        assert!((su - 4.0).abs() < 1e-9);
        assert!((sd - 4.0).abs() < 1e-9);
        // Half filling: site-summed density is 1 per site.
        for i in 0..8 {
            let tot = sol.densities_up[i] + sol.densities_down[i];
            assert!((tot - 1.0).abs() < 1e-6, "site {i}: {tot}");
        }
    }

    #[test]
    fn test_idempotence_at_fixed_point() {
        let spec = ModelSpec::half_filled_chain(6, 10.0).unwrap();
        let sol = hf_ground_state(&spec, 10, 3).unwrap();
        let again = hf_single_shot(
            &spec,
            &sol.densities_up,
            &sol.densities_down,
            &HfOptions::default(),
        )
        .unwrap();
        assert!(again.converged);
        assert!((again.energy - sol.energy).abs() < 1e-8);
        for i in 0..6 {
            assert!((again.densities_up[i] - sol.densities_up[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn test_restricted_mode_stays_symmetric() {
        let spec = ModelSpec::half_filled_chain(6, 10.0).unwrap();
        let opts = HfOptions {
            restricted: true,
            ..Default::default()
        };
        let sol = hf_ground_state_with(&spec, 10, 3, &opts).unwrap();
        for i in 0..6 {
            assert!((sol.densities_up[i] - sol.densities_down[i]).abs() < 1e-12);
        }
        // Unrestricted can only go lower.
        let free = hf_ground_state(&spec, 10, 3).unwrap();
        assert!(free.energy <= sol.energy + 1e-10);
    }

    #[test]
    fn test_bad_initial_densities_rejected() {
        let spec = ModelSpec::half_filled_chain(2, 1.0).unwrap();
        let opts = HfOptions::default();
        assert!(hf_single_shot(&spec, &[1.5, -0.5], &[0.5, 0.5], &opts).is_err());
        assert!(hf_single_shot(&spec, &[0.9, 0.9], &[0.5, 0.5], &opts).is_err());
        assert!(hf_single_shot(&spec, &[0.5], &[0.5, 0.5], &opts).is_err());
    }

    #[test]
    fn test_rescale_density_helper() {
        let mut d = vec![0.9, 0.9, 0.9, 0.9];
        rescale_density(&mut d, 2);
        assert!((d.iter().sum::<f64>() - 2.0).abs() < 1e-9);
        assert!(d.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let mut neel = vec![1.0, 0.0, 1.0, 0.0];
        rescale_density(&mut neel, 2);
        assert_eq!(neel, vec![1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn test_hf_state_vector_normalized() {
        let spec = ModelSpec::half_filled_chain(4, 10.0).unwrap();
        let basis = FockBasis::enumerate(&spec).unwrap();
        let sol = hf_ground_state(&spec, 10, 11).unwrap();
        let state = hf_state_vector(&sol, &basis).unwrap();
        assert!(state.is_normalized());
    }
}
