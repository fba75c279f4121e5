//! Deterministic parallel vector kernels.
//!
//! Reductions are chunked with a fixed chunk size and the partial sums are
//! combined sequentially, so results are bitwise reproducible regardless of
//! the rayon schedule.

use num_complex::Complex64;
use rayon::prelude::*;

const CHUNK: usize = 16_384;

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() < CHUNK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum())
        .collect();
    partials.iter().sum()
}

pub fn norm2_f64(a: &[f64]) -> f64 {
    dot_f64(a, a)
}

/// y += alpha * x
pub fn axpy_f64(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    if x.len() < CHUNK {
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += alpha * xi;
        }
        return;
    }
    y.par_chunks_mut(CHUNK)
        .zip(x.par_chunks(CHUNK))
        .for_each(|(cy, cx)| {
            for (yi, xi) in cy.iter_mut().zip(cx) {
                *yi += alpha * xi;
            }
        });
}

pub fn scale_f64(alpha: f64, x: &mut [f64]) {
    x.par_chunks_mut(CHUNK).for_each(|c| {
        for v in c {
            *v *= alpha;
        }
    });
}

/// ⟨a|b⟩ with the conjugate on `a`.
pub fn dot_c64(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() < CHUNK {
        return a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    }
    let partials: Vec<Complex64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x.conj() * y).sum())
        .collect();
    partials.iter().sum()
}

pub fn norm2_c64(a: &[Complex64]) -> f64 {
    if a.len() < CHUNK {
        return a.iter().map(|x| x.norm_sqr()).sum();
    }
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum())
        .collect();
    partials.iter().sum()
}
