//! Noninteracting reference states.
//!
//! The single-particle spectrum of the chain fixes the orbital matrix
//! φ_α(i); filling the lowest orbitals per spin gives the noninteracting
//! ground state ψ₀ as a product of two Slater determinants. Sector
//! amplitudes are determinant minors of the occupied orbital columns with
//! rows ordered by the spin-blocked Jordan-Wigner convention, so signs stay
//! consistent with the circuit path.

use crate::basis::FockBasis;
use crate::error::CoreError;
use crate::model::{Boundary, ModelSpec};
use crate::state::SectorState;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// Eigenbasis of the one-body hopping matrix.
#[derive(Debug, Clone)]
pub struct OrbitalBasis {
    /// Ascending single-particle energies.
    pub energies: Vec<f64>,
    /// Column α is the orbital φ_α(i); columns are orthonormal and
    /// phase-fixed (largest-magnitude entry positive).
    pub orbitals: DMatrix<f64>,
}

impl OrbitalBasis {
    /// max |QᵀQ − I| entry; diagnostic for the orthonormality invariant.
    pub fn orthonormality_defect(&self) -> f64 {
        let q = &self.orbitals;
        let gram = q.transpose() * q;
        let n = gram.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }
}

/// One-body hopping matrix of the chain: −t on nearest-neighbor bonds.
pub fn hopping_matrix(spec: &ModelSpec) -> DMatrix<f64> {
    let n = spec.n_sites;
    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        h[(i, i + 1)] -= spec.hopping;
        h[(i + 1, i)] -= spec.hopping;
    }
    if spec.boundary == Boundary::Periodic && n > 1 {
        h[(0, n - 1)] -= spec.hopping;
        h[(n - 1, 0)] -= spec.hopping;
    }
    h
}

/// Diagonalize the hopping matrix; energies ascending, columns phase-fixed.
pub fn single_particle_modes(spec: &ModelSpec) -> OrbitalBasis {
    let n = spec.n_sites;
    if n == 1 {
        return OrbitalBasis {
            energies: vec![0.0],
            orbitals: DMatrix::identity(1, 1),
        };
    }
    let eig = hopping_matrix(spec).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut energies = Vec::with_capacity(n);
    let mut orbitals = DMatrix::<f64>::zeros(n, n);
    for (col, &idx) in order.iter().enumerate() {
        energies.push(eig.eigenvalues[idx]);
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
    OrbitalBasis { energies, orbitals }
}

/// Expand the Slater determinant of the lowest n↑/n↓ orbitals into sector
/// amplitudes. Errors when the Fermi level is degenerate, since the lowest
/// columns are then ambiguous.
pub fn slater_amplitudes(
    orbitals: &OrbitalBasis,
    spec: &ModelSpec,
    basis: &Arc<FockBasis>,
) -> Result<SectorState, CoreError> {
    let n = spec.n_sites;
    for n_occ in [spec.n_up, spec.n_down] {
        if n_occ > 0 && n_occ < n {
            let gap = orbitals.energies[n_occ] - orbitals.energies[n_occ - 1];
            if gap.abs() < 1e-12 {
                return Err(CoreError::DegenerateFermiLevel(n_occ - 1, n_occ));
            }
        }
    }
    let occ_up = orbitals.orbitals.columns(0, spec.n_up).into_owned();
    let occ_dn = orbitals.orbitals.columns(0, spec.n_down).into_owned();
    let mut state = slater_determinant_state(&occ_up, &occ_dn, basis)?;
    let norm = state.norm();
    debug_assert!(
        (norm - 1.0).abs() < 1e-9,
        "orthonormal orbitals must give a unit-norm determinant expansion, got {norm}"
    );
    state.normalize();
    Ok(state)
}

/// Determinant-minor engine for an arbitrary pair of occupied orbital
/// sets (columns of `occ_up`/`occ_dn`): amplitude of word w is
/// det(M↑(w))·det(M↓(w)), the occupied-row minors. Also backs the
/// Hartree-Fock determinant expansion. The result is not normalized.
pub fn slater_determinant_state(
    occ_up: &DMatrix<f64>,
    occ_dn: &DMatrix<f64>,
    basis: &Arc<FockBasis>,
) -> Result<SectorState, CoreError> {
    let n = basis.n_sites();
    if occ_up.nrows() != n || occ_dn.nrows() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: occ_up.nrows().max(occ_dn.nrows()),
        });
    }
    if occ_up.ncols() != basis.n_up() || occ_dn.ncols() != basis.n_down() {
        return Err(CoreError::BasisMismatch);
    }
    let ku = basis.n_up();
    let kd = basis.n_down();
    let amps: Vec<Complex64> = basis
        .words()
        .par_iter()
        .map_init(
            || (vec![0.0f64; ku * ku], vec![0.0f64; kd * kd]),
            |(buf_up, buf_dn), &w| {
                let (up, dn) = basis.split_word(w);
                let du = det_minor(occ_up, up, ku, buf_up);
                let dd = det_minor(occ_dn, dn, kd, buf_dn);
                Complex64::new(du * dd, 0.0)
            },
        )
        .collect();
    SectorState::from_amplitudes(Arc::clone(basis), amps)
}

/// det of the k×k submatrix of `cols` picking the rows set in `mask`
/// (ascending site order). LU with partial pivoting on a scratch buffer.
fn det_minor(cols: &DMatrix<f64>, mask: u64, k: usize, buf: &mut [f64]) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut r = 0usize;
    let mut bits = mask;
    while bits != 0 {
        let site = bits.trailing_zeros() as usize;
        for c in 0..k {
            buf[r * k + c] = cols[(site, c)];
        }
        bits &= bits - 1;
        r += 1;
    }
    debug_assert_eq!(r, k);
    lu_det(buf, k)
}

fn lu_det(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0f64;
    for p in 0..k {
        let mut piv = p;
        let mut best = a[p * k + p].abs();
        for r in p + 1..k {
            let v = a[r * k + p].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != p {
            for c in 0..k {
                a.swap(p * k + c, piv * k + c);
            }
            det = -det;
        }
        let d = a[p * k + p];
        det *= d;
        for r in p + 1..k {
            let f = a[r * k + p] / d;
            if f != 0.0 {
                for c in p + 1..k {
                    a[r * k + c] -= f * a[p * k + c];
                }
            }
        }
    }
    det
}
