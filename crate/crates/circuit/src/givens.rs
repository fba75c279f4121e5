//! Givens decomposition of a filled-orbital block into adjacent-mode
//! rotations.
//!
//! The occupied-orbital matrix A (N×k, orthonormal columns) determines the
//! Slater determinant up to right-multiplication by a k×k orthogonal mixer,
//! which is free. The decomposition reduces A to [diag(±1); 0] with
//!
//! 1. free column rotations zeroing the bottom-left corner entries
//!    (r − c > N − k), then
//! 2. exactly k(N−k) adjacent-row rotations zeroing the staircase
//!    c < r ≤ c + (N−k), grouped so no fill-in touches finished entries.
//!
//! Reversing the row rotations yields the circuit: applied to the reference
//! determinant |1^k 0^{N−k}⟩ it prepares the target Slater state, up to the
//! recorded pivot sign.

use crate::error::CircuitError;
use gwf_core::OrbitalBasis;
use nalgebra::DMatrix;

/// One two-mode rotation acting on lines (line, line+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    pub line: usize,
    pub angle: f64,
}

#[derive(Debug, Clone)]
pub struct GivensDecomposition {
    /// Rotations in circuit order (first entry applied first).
    pub rotations: Vec<GivensRotation>,
    /// The circuit prepares −|ψ⟩ when set; the prep builder compensates
    /// with a global-phase Ry(2π).
    pub negate_state: bool,
}

/// Decompose the lowest `n_filled` orbital columns into adjacent-mode
/// Givens rotations. Exact-zero angles (identity rotations) are dropped,
/// so an identity orbital block yields an empty list.
pub fn givens_decompose(
    orbitals: &OrbitalBasis,
    n_filled: usize,
) -> Result<GivensDecomposition, CircuitError> {
    let n = orbitals.orbitals.nrows();
    if n_filled > n {
        return Err(CircuitError::ParameterOutOfRange(format!(
            "n_filled = {n_filled} exceeds {n} modes"
        )));
    }
    let mut a = orbitals.orbitals.columns(0, n_filled).into_owned();
    let k = n_filled;
    if k == 0 || k == n {
        return Ok(GivensDecomposition {
            rotations: Vec::new(),
            negate_state: false,
        });
    }
    let h = n - k;

    // Free column rotations: clear A[r][c] for r − c > h, sweeping each
    // affected row's weight to the right. Processing rows bottom-up keeps
    // finished rows untouched (their zeroed columns come in pairs).
    for r in (h + 1..n).rev() {
        for c in 0..r - h {
            if c + 1 >= k {
                break;
            }
            let theta = f64::atan2(-a[(r, c)], a[(r, c + 1)]);
            rotate_columns(&mut a, c, c + 1, theta);
        }
    }

    // Gate rotations on rows (r−1, r), eliminating the staircase by
    // diagonal groups d = r − c from h down to 1.
    let mut elimination: Vec<GivensRotation> = Vec::with_capacity(k * h);
    for d in (1..=h).rev() {
        for c in 0..k {
            let r = c + d;
            let theta = f64::atan2(-a[(r, c)], a[(r - 1, c)]);
            rotate_rows(&mut a, r - 1, r, theta);
            elimination.push(GivensRotation { line: r - 1, angle: theta });
        }
    }

    // A is now [diag(d_c); 0] with d_c = ±1 up to roundoff.
    let mut det_sign = 1.0f64;
    for c in 0..k {
        let pivot = a[(c, c)];
        if (pivot.abs() - 1.0).abs() > 1e-9 {
            return Err(CircuitError::ParameterOutOfRange(format!(
                "rank-deficient orbital block: pivot {pivot} at column {c}"
            )));
        }
        det_sign *= pivot.signum();
    }
    for r in 0..n {
        for c in 0..k {
            if r != c {
                debug_assert!(
                    a[(r, c)].abs() < 1e-9,
                    "elimination residue {} at ({r},{c})",
                    a[(r, c)]
                );
            }
        }
    }

    // Circuit order: reversed elimination with transposed (negated) angles.
    let rotations: Vec<GivensRotation> = elimination
        .into_iter()
        .rev()
        .map(|g| GivensRotation { line: g.line, angle: -g.angle })
        .filter(|g| g.angle != 0.0)
        .collect();
    Ok(GivensDecomposition {
        rotations,
        negate_state: det_sign < 0.0,
    })
}

/// Apply the single-particle rotation of a circuit-order rotation list to
/// the reference block [I_k; 0]: the result spans the prepared
/// determinant. Test support for span/sign verification.
pub fn apply_rotations_to_reference(
    rotations: &[GivensRotation],
    n: usize,
    k: usize,
) -> DMatrix<f64> {
    let mut q = DMatrix::<f64>::zeros(n, k);
    for c in 0..k {
        q[(c, c)] = 1.0;
    }
    for rot in rotations {
        rotate_rows(&mut q, rot.line, rot.line + 1, rot.angle);
    }
    q
}

/// rows (i, j) ← [[cos, −sin], [sin, cos]] · rows (i, j)
fn rotate_rows(a: &mut DMatrix<f64>, i: usize, j: usize, theta: f64) {
    let (c, s) = (theta.cos(), theta.sin());
    for col in 0..a.ncols() {
        let x = a[(i, col)];
        let y = a[(j, col)];
        a[(i, col)] = c * x - s * y;
        a[(j, col)] = s * x + c * y;
    }
}

/// cols (i, j) ← cols (i, j) · [[cos, −sin], [sin, cos]]
fn rotate_columns(a: &mut DMatrix<f64>, i: usize, j: usize, theta: f64) {
    let (c, s) = (theta.cos(), theta.sin());
    for row in 0..a.nrows() {
        let x = a[(row, i)];
        let y = a[(row, j)];
        a[(row, i)] = c * x + s * y;
        a[(row, j)] = -s * x + c * y;
    }
}
