//! Amplitude vectors over a sector basis.

use crate::basis::FockBasis;
use crate::error::CoreError;
use crate::linalg;
use num_complex::Complex64;
use std::sync::Arc;

/// A (not necessarily normalized) state in a fixed particle-number sector:
/// one complex amplitude per canonical basis word.
#[derive(Debug, Clone)]
pub struct SectorState {
    basis: Arc<FockBasis>,
    amplitudes: Vec<Complex64>,
}

impl SectorState {
    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let dim = basis.dimension();
        Self {
            basis,
            amplitudes: vec![Complex64::ZERO; dim],
        }
    }

    pub fn from_amplitudes(
        basis: Arc<FockBasis>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, CoreError> {
        if amplitudes.len() != basis.dimension() {
            return Err(CoreError::DimensionMismatch {
                expected: basis.dimension(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn from_real(basis: Arc<FockBasis>, values: &[f64]) -> Result<Self, CoreError> {
        let amplitudes = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_amplitudes(basis, amplitudes)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// ⟨self|other⟩ with the conjugate on `self`.
    pub fn dot(&self, other: &Self) -> Result<Complex64, CoreError> {
        self.check_same_basis(other)?;
        Ok(linalg::dot_c64(&self.amplitudes, &other.amplitudes))
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm2_c64(&self.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Σ|c|² = 1 within 1e-12.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amplitudes {
                *a *= inv;
            }
        }
    }

    /// Rotate the global phase so the largest-magnitude amplitude is real
    /// positive; makes state vectors reproducible across runs.
    pub fn phase_canonicalize(&mut self) {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let m = a.norm_sqr();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag == 0.0 {
            return;
        }
        let a = self.amplitudes[best];
        let phase = a / a.norm();
        let rot = phase.conj();
        for amp in &mut self.amplitudes {
            *amp *= rot;
        }
        // Scrub the rotation's rounding on the pivot itself.
        self.amplitudes[best] = Complex64::new(self.amplitudes[best].norm(), 0.0);
    }

    pub fn check_same_basis(&self, other: &Self) -> Result<(), CoreError> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis.same_sector(&other.basis) {
            Ok(())
        } else {
            Err(CoreError::BasisMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Boundary, ModelSpec};

    fn basis(n: usize, nu: usize, nd: usize) -> Arc<FockBasis> {
        let spec = ModelSpec::new(n, 1.0, 0.0, Boundary::Open, nu, nd).unwrap();
        FockBasis::enumerate(&spec).unwrap()
    }

    #[test]
    fn test_normalize_and_flag() {
        let b = basis(2, 1, 1);
        let mut v = SectorState::from_real(b, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(!v.is_normalized());
        v.normalize();
        assert!(v.is_normalized());
        assert!((v.amplitudes()[0].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn test_phase_canonicalization() {
        let b = basis(2, 1, 1);
        let amps = vec![
            Complex64::new(0.0, -0.8),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.1, 0.5),
        ];
        let mut v = SectorState::from_amplitudes(b, amps).unwrap();
        v.phase_canonicalize();
        assert!(v.amplitudes()[0].im.abs() < 1e-15);
        assert!(v.amplitudes()[0].re > 0.0);
    }

    #[test]
    fn test_basis_mismatch_detected() {
        let a = SectorState::zero(basis(2, 1, 1));
        let c = SectorState::zero(basis(2, 2, 1));
        assert!(matches!(a.dot(&c), Err(CoreError::BasisMismatch)));
    }

    #[test]
    fn test_same_sector_distinct_instances_ok() {
        let a = SectorState::zero(basis(2, 1, 1));
        let b = SectorState::zero(basis(2, 1, 1));
        assert!(a.dot(&b).is_ok());
    }
}
