use num_complex::Complex64;

use super::eigen::Tridiagonal;
use super::{CMatrix, CVector, Result};

/// `exp(-i H t)` built from one spectral decomposition of `H`.
///
/// The decomposition is kept in factored form, so applying the propagator
/// to a state costs `O(n^2)` per call and any number of times `t` can be
/// evaluated against the same factorization.
pub struct SpectralPropagator {
    spectrum: Tridiagonal,
}

impl SpectralPropagator {
    pub fn new(h: &CMatrix) -> Result<Self> {
        Ok(Self {
            spectrum: Tridiagonal::decompose(h)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// `exp(-i H t) psi`.
    pub fn apply(&self, t: f64, psi: &CVector) -> CVector {
        assert_eq!(psi.dim(), self.dim(), "propagator: dimension mismatch");
        let mut c = self.spectrum.to_eigenbasis(psi.as_slice());
        for (ck, &lam) in c.iter_mut().zip(&self.spectrum.eigenvalues) {
            *ck *= Complex64::from_polar(1.0, -lam * t);
        }
        CVector {
            data: self.spectrum.to_standard_basis(&c),
        }
    }

    /// The full propagator matrix at time `t`.
    pub fn matrix(&self, t: f64) -> CMatrix {
        let n = self.dim();
        let mut u = CMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.apply(t, &CVector::basis(n, j));
            u.set_column(j, &col);
        }
        u
    }
}

/// `U = exp(-i H t)` for Hermitian `H`, by spectral decomposition.
pub fn expm_unitary(h: &CMatrix, t: f64) -> Result<CMatrix> {
    if !t.is_finite() {
        return Err(super::LinalgError::NonFinite);
    }
    Ok(SpectralPropagator::new(h)?.matrix(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{LinalgError, ONE};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.sub(b).max_abs() <= tol
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let u = expm_unitary(&CMatrix::zeros(3, 3), 17.0).unwrap();
        assert_eq!(u, CMatrix::identity(3));
    }

    #[test]
    fn sigma_z_half_period() {
        let h = CMatrix::from_diag(&[ONE, -ONE]);
        let u = expm_unitary(&h, PI).unwrap();
        assert!(close(&u, &CMatrix::identity(2).scale(-ONE), 1e-14));
    }

    #[test]
    fn sigma_x_quarter_period() {
        // exp(-i sigma_x t) = cos t I - i sin t sigma_x
        let sx = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let u = expm_unitary(&sx, FRAC_PI_2).unwrap();
        let expected = sx.scale(Complex64::new(0.0, -1.0));
        assert!(close(&u, &expected, 1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(expm_unitary(&h, 1.0), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn apply_matches_matrix() {
        let h = CMatrix::from_fn(5, 5, |i, j| {
            Complex64::new(
                (i + j) as f64 * 0.3,
                if i < j {
                    0.2
                } else if i > j {
                    -0.2
                } else {
                    0.0
                },
            )
        });
        let prop = SpectralPropagator::new(&h).unwrap();
        let psi = CVector::new((0..5).map(|i| Complex64::new(1.0, i as f64)).collect()).unwrap();
        let direct = prop.matrix(2.5).mul_vec(&psi);
        let applied = prop.apply(2.5, &psi);
        assert!(direct.sub(&applied).max_abs() < 1e-12);
    }
}
