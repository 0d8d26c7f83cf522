use num_complex::Complex64;

use super::{hermitian_eig, CMatrix, CVector, LinalgError, Result};

/// Smallest admissible `|lambda|_min / |lambda|_max`.
const SINGULAR_RATIO: f64 = 1e-12;

/// Solves `H x = rhs` for Hermitian, nonsingular `H` through its spectral
/// decomposition. The eigenvalues double as the conditioning check.
pub fn solve_hermitian(h: &CMatrix, rhs: &CVector) -> Result<CVector> {
    if rhs.dim() != h.rows() {
        return Err(LinalgError::DimMismatch {
            expected: h.rows(),
            actual: rhs.dim(),
        });
    }
    let eig = hermitian_eig(h)?;
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let smallest = eig.eigenvalues.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
    let ratio = if largest > 0.0 { smallest / largest } else { 0.0 };
    if ratio <= SINGULAR_RATIO {
        return Err(LinalgError::Singular { ratio });
    }
    let v = &eig.eigenvectors;
    let mut coeffs = v.adjoint_mul_vec(rhs);
    for (k, lam) in eig.eigenvalues.iter().enumerate() {
        coeffs[k] /= Complex64::new(*lam, 0.0);
    }
    let mut x = v.mul_vec(&coeffs);

    // one step of iterative refinement
    let r = rhs.sub(&h.mul_vec(&x));
    let mut dc = v.adjoint_mul_vec(&r);
    for (k, lam) in eig.eigenvalues.iter().enumerate() {
        dc[k] /= Complex64::new(*lam, 0.0);
    }
    x = x.add(&v.mul_vec(&dc));
    Ok(x)
}
