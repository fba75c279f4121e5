//! Gutzwiller wave function machinery.
//!
//! The projector ∏_i (1 − g n̂_{i↑} n̂_{i↓}) scales the amplitude of every
//! basis word with n doubly occupied sites by (1−g)^n. Because the ancilla
//! scheme post-selects on all-zero outcomes, the squared norm of the
//! projected (unnormalized) state is exactly the success probability
//!
//!   P(N, g) = Σ_n (1−g)^{2n} Σ_i |c_i^{(n)}|²,
//!
//! and 1/P is the expected repetition count. The optimal g minimizes the
//! energy of the normalized projected state.

use crate::basis::{binomial, double_occupancy, FockBasis};
use crate::error::CoreError;
use crate::hamiltonian::SparseHamiltonian;
use crate::linalg;
use crate::model::ModelSpec;
use crate::solver::{self, DENSE_CAP};
use crate::state::SectorState;
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// Weight and state-count of each double-occupancy level.
#[derive(Debug, Clone)]
pub struct DoubleOccSpectrum {
    /// w_n = Σ_i |c_i^{(n)}|², n = 0..=min(n_up, n_down).
    pub weights: Vec<f64>,
    /// M_n: number of sector words with n doubly occupied sites.
    pub multiplicities: Vec<u64>,
}

/// Scale every amplitude by (1−g)^{d(word)}. The output is intentionally
/// not renormalized: its squared norm is the post-selection probability.
pub fn apply_projector(g: f64, v: &SectorState) -> Result<SectorState, CoreError> {
    check_g(g)?;
    let basis = v.basis();
    let n = basis.n_sites();
    let factors = suppression_powers(g, basis.n_up().min(basis.n_down()));
    let amps: Vec<Complex64> = basis
        .words()
        .iter()
        .zip(v.amplitudes())
        .map(|(&w, &a)| a * factors[double_occupancy(w, n) as usize])
        .collect();
    SectorState::from_amplitudes(Arc::clone(basis), amps)
}

/// Bin |amplitude|² by double occupancy; multiplicities come from the
/// closed-form count at half filling and from enumeration otherwise.
pub fn double_occ_spectrum(v: &SectorState) -> DoubleOccSpectrum {
    let basis = v.basis();
    let n = basis.n_sites();
    let n_max = basis.n_up().min(basis.n_down());
    let mut weights = vec![0.0f64; n_max + 1];
    for (&w, a) in basis.words().iter().zip(v.amplitudes()) {
        weights[double_occupancy(w, n) as usize] += a.norm_sqr();
    }
    DoubleOccSpectrum {
        weights,
        multiplicities: multiplicities(basis),
    }
}

/// M_n for the sector. At half filling this is the closed form
/// C(N,n)·C(N−n,n)·C(N−2n,(N−2n)/2).
pub fn multiplicities(basis: &FockBasis) -> Vec<u64> {
    let n = basis.n_sites();
    let n_max = basis.n_up().min(basis.n_down());
    let half_filled =
        n % 2 == 0 && basis.n_up() == n / 2 && basis.n_down() == n / 2;
    if half_filled {
        let nn = n as u64;
        (0..=n_max as u64)
            .map(|k| {
                binomial(nn, k)
                    * binomial(nn - k, k)
                    * binomial(nn - 2 * k, (nn - 2 * k) / 2)
            })
            .collect()
    } else {
        let mut m = vec![0u64; n_max + 1];
        for &w in basis.words() {
            m[double_occupancy(w, n) as usize] += 1;
        }
        m
    }
}

/// P(N, g) = Σ_n (1−g)^{2n} w_n.
pub fn success_probability(g: f64, spectrum: &DoubleOccSpectrum) -> Result<f64, CoreError> {
    check_g(g)?;
    let q = (1.0 - g) * (1.0 - g);
    let mut p = 0.0;
    let mut qp = 1.0;
    for &w in &spectrum.weights {
        p += qp * w;
        qp *= q;
    }
    Ok(p)
}

/// |⟨a|b⟩|², phase independent.
pub fn fidelity(a: &SectorState, b: &SectorState) -> Result<f64, CoreError> {
    Ok(a.dot(b)?.norm_sqr())
}

/// Outcome of the energy minimization over g (no exact-state comparison).
#[derive(Debug, Clone)]
pub struct GwfOptimum {
    pub g_opt: f64,
    /// Energy of the normalized projected state at g_opt.
    pub energy: f64,
    pub success_prob: f64,
    /// 1 / success_prob.
    pub repetitions: f64,
    /// Normalized GWF at g_opt.
    pub state: SectorState,
}

/// Full GWF characterization including fidelity against the exact ground
/// state (solved internally).
#[derive(Debug, Clone)]
pub struct GwfResult {
    pub g_opt: f64,
    pub energy: f64,
    pub fidelity_exact: f64,
    pub success_prob: f64,
    pub repetitions: f64,
    pub state: SectorState,
}

/// Flat serialization of a [`GwfResult`].
#[derive(Debug, Clone, Serialize)]
pub struct GwfRecord {
    pub n: usize,
    pub u_over_t: f64,
    pub g_opt: f64,
    pub energy: f64,
    pub fidelity: f64,
    pub success_prob: f64,
    pub repetitions: f64,
}

impl GwfResult {
    pub fn to_record(&self, spec: &ModelSpec) -> GwfRecord {
        GwfRecord {
            n: spec.n_sites,
            u_over_t: spec.u_over_t(),
            g_opt: self.g_opt,
            energy: self.energy,
            fidelity: self.fidelity_exact,
            success_prob: self.success_prob,
            repetitions: self.repetitions,
        }
    }

    pub fn to_json(&self, spec: &ModelSpec) -> String {
        serde_json::to_string_pretty(&self.to_record(spec)).expect("plain struct serializes")
    }
}

/// Minimize E(g) = ⟨P_G ψ₀|H|P_G ψ₀⟩ / ⟨P_G ψ₀|P_G ψ₀⟩ over g ∈ [0,1]:
/// 101-point grid scan (guards against local minima) refined by golden
/// section to |Δg| < 1e−8. Both endpoints are always evaluated.
pub fn optimize_g(
    psi0: &SectorState,
    h: &SparseHamiltonian,
) -> Result<GwfOptimum, CoreError> {
    if psi0.dimension() != h.dimension() {
        return Err(CoreError::DimensionMismatch {
            expected: h.dimension(),
            got: psi0.dimension(),
        });
    }
    if !psi0.is_normalized() {
        return Err(CoreError::ParameterOutOfRange(
            "optimize_g expects a normalized reference state".into(),
        ));
    }
    let eval = ProjectedEnergy::new(psi0, h);
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(160);
    let grid_n = 100usize;
    for k in 0..=grid_n {
        let g = k as f64 / grid_n as f64;
        samples.push((g, eval.energy(g)));
    }
    let best_k = argmin(&samples);
    let lo = if best_k == 0 { 0.0 } else { samples[best_k - 1].0 };
    let hi = if best_k == samples.len() - 1 { 1.0 } else { samples[best_k + 1].0 };
    golden_section(&eval, lo, hi, 1e-8, &mut samples);
    let (g_opt, energy) = samples[argmin(&samples)];

    let spectrum = double_occ_spectrum(psi0);
    let success_prob = success_probability(g_opt, &spectrum)?;
    let mut state = apply_projector(g_opt, psi0)?;
    state.normalize();
    state.phase_canonicalize();
    Ok(GwfOptimum {
        g_opt,
        energy,
        success_prob,
        repetitions: 1.0 / success_prob,
        state,
    })
}

/// [`optimize_g`] plus the fidelity with the exact ground state.
pub fn optimal_g(
    spec: &ModelSpec,
    psi0: &SectorState,
    h: &SparseHamiltonian,
) -> Result<GwfResult, CoreError> {
    spec.validate()?;
    let opt = optimize_g(psi0, h)?;
    let exact = solver::ground_state(h, solver::DEFAULT_TOL, solver::DEFAULT_MAX_ITER)?;
    let fid = fidelity(&opt.state, &exact.state)?;
    Ok(GwfResult {
        g_opt: opt.g_opt,
        energy: opt.energy,
        fidelity_exact: fid,
        success_prob: opt.success_prob,
        repetitions: opt.repetitions,
        state: opt.state,
    })
}

/// QPE/QITE repetition estimate 1/|⟨exact|trial⟩|², optionally multiplied by
/// the preparation overhead of the trial state itself.
#[derive(Debug, Clone, Copy)]
pub struct RepetitionEstimate {
    pub repetitions: f64,
    /// Set when the overlap vanishes and the estimate is the infinity sentinel.
    pub overlap_vanishes: bool,
}

pub fn qpe_qite_repetitions(
    trial: &SectorState,
    exact: &SectorState,
    include_prep_overhead: bool,
    prep_reps: f64,
) -> Result<RepetitionEstimate, CoreError> {
    let f = fidelity(trial, exact)?;
    if f < 1e-300 {
        return Ok(RepetitionEstimate {
            repetitions: f64::INFINITY,
            overlap_vanishes: true,
        });
    }
    let mut reps = 1.0 / f;
    if include_prep_overhead {
        reps *= prep_reps;
    }
    Ok(RepetitionEstimate {
        repetitions: reps,
        overlap_vanishes: false,
    })
}

/// Probability of collapsing onto the exact ground state after imaginary
/// time τ: P(τ) = N²(τ)·e^{−2ε₀τ}·|⟨exact|trial⟩|², evaluated spectrally
/// via dense diagonalization.
pub fn qite_success_curve(
    trial: &SectorState,
    h: &SparseHamiltonian,
    tau_grid: &[f64],
) -> Result<Vec<f64>, CoreError> {
    let dim = h.dimension();
    if dim > DENSE_CAP {
        return Err(CoreError::DenseCapExceeded { cap: DENSE_CAP, got: dim });
    }
    if trial.dimension() != dim {
        return Err(CoreError::DimensionMismatch { expected: dim, got: trial.dimension() });
    }
    if !trial.is_normalized() {
        return Err(CoreError::ParameterOutOfRange(
            "qite_success_curve expects a normalized trial".into(),
        ));
    }
    if tau_grid.iter().any(|&t| t < 0.0 || !t.is_finite()) {
        return Err(CoreError::ParameterOutOfRange(
            "imaginary times must be finite and non-negative".into(),
        ));
    }
    let eig = h.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let e0 = eig.eigenvalues[order[0]];
    // |⟨n|trial⟩|² per eigenstate, ground state first.
    let mut weights = Vec::with_capacity(dim);
    let mut gaps = Vec::with_capacity(dim);
    for &idx in &order {
        let mut c = Complex64::ZERO;
        for (j, a) in trial.amplitudes().iter().enumerate() {
            c += eig.eigenvectors[(j, idx)] * a;
        }
        weights.push(c.norm_sqr());
        gaps.push(eig.eigenvalues[idx] - e0);
    }
    let w0 = weights[0];
    Ok(tau_grid
        .iter()
        .map(|&tau| {
            let z: f64 = weights
                .iter()
                .zip(&gaps)
                .map(|(&w, &gap)| w * (-2.0 * gap * tau).exp())
                .sum();
            w0 / z
        })
        .collect())
}

fn check_g(g: f64) -> Result<(), CoreError> {
    if !(0.0..=1.0).contains(&g) || !g.is_finite() {
        return Err(CoreError::ParameterOutOfRange(format!(
            "g must lie in [0,1], got {g}"
        )));
    }
    Ok(())
}

fn suppression_powers(g: f64, n_max: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n_max + 1);
    let mut x = 1.0;
    for _ in 0..=n_max {
        p.push(x);
        x *= 1.0 - g;
    }
    p
}

fn argmin(samples: &[(f64, f64)]) -> usize {
    let mut best = 0usize;
    for (i, &(g, e)) in samples.iter().enumerate() {
        let (bg, be) = samples[best];
        if e < be || (e == be && g < bg) {
            best = i;
        }
    }
    best
}

fn golden_section(
    eval: &ProjectedEnergy<'_>,
    mut a: f64,
    mut b: f64,
    tol: f64,
    samples: &mut Vec<(f64, f64)>,
) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval.energy(c);
    let mut fd = eval.energy(d);
    samples.push((c, fc));
    samples.push((d, fd));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval.energy(c);
            samples.push((c, fc));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval.energy(d);
            samples.push((d, fd));
        }
    }
}

/// Reusable E(g) evaluator. Real reference states (the usual case) take a
/// fast real-arithmetic path with preallocated buffers.
struct ProjectedEnergy<'a> {
    h: &'a SparseHamiltonian,
    docc: Vec<u8>,
    real_amps: Option<Vec<f64>>,
    state: &'a SectorState,
    n_max: usize,
}

impl<'a> ProjectedEnergy<'a> {
    fn new(psi0: &'a SectorState, h: &'a SparseHamiltonian) -> Self {
        let basis = psi0.basis();
        let n = basis.n_sites();
        let docc: Vec<u8> = basis
            .words()
            .iter()
            .map(|&w| double_occupancy(w, n) as u8)
            .collect();
        let real_amps = if psi0.amplitudes().iter().all(|a| a.im == 0.0) {
            Some(psi0.amplitudes().iter().map(|a| a.re).collect())
        } else {
            None
        };
        let n_max = basis.n_up().min(basis.n_down());
        Self {
            h,
            docc,
            real_amps,
            state: psi0,
            n_max,
        }
    }

    /// E(g); +∞ when the projected state vanishes (fully projected sector).
    fn energy(&self, g: f64) -> f64 {
        let factors = suppression_powers(g, self.n_max);
        if let Some(re) = &self.real_amps {
            let p: Vec<f64> = re
                .iter()
                .zip(&self.docc)
                .map(|(&a, &d)| a * factors[d as usize])
                .collect();
            let n2 = linalg::norm2_f64(&p);
            if n2 < 1e-280 {
                return f64::INFINITY;
            }
            let mut hp = vec![0.0f64; p.len()];
            self.h.apply_real(&p, &mut hp);
            linalg::dot_f64(&p, &hp) / n2
        } else {
            let amps: Vec<Complex64> = self
                .state
                .amplitudes()
                .iter()
                .zip(&self.docc)
                .map(|(&a, &d)| a * factors[d as usize])
                .collect();
            let p = SectorState::from_amplitudes(Arc::clone(self.state.basis()), amps)
                .expect("same basis");
            let n2 = p.norm_sqr();
            if n2 < 1e-280 {
                return f64::INFINITY;
            }
            let hp = self.h.apply(&p).expect("dimensions match");
            p.dot(&hp).expect("same basis").re / n2
        }
    }
}
