use num_complex::Complex64;

use super::{CMatrix, CVector, LinalgError, Result, ZERO};

const MAX_SWEEPS: usize = 80;

/// `A = S diag(singulars) V^dagger`.
///
/// For an `m x n` input, `left` is `m x min(m, n)` with orthonormal
/// columns and `right` is the full `n x n` unitary, so every right singular
/// vector is available even when `m < n`.
#[derive(Debug, Clone)]
pub struct SvdFactorization {
    pub left: CMatrix,
    /// Descending, nonnegative.
    pub singulars: Vec<f64>,
    pub right: CMatrix,
}

impl SvdFactorization {
    pub fn largest(&self) -> f64 {
        self.singulars[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.singulars.last().expect("nonempty")
    }

    /// Right singular vector `k` (column `k` of `V`).
    pub fn right_vector(&self, k: usize) -> CVector {
        self.right.column(k)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singulars.len();
        let scaled = CMatrix::from_fn(self.left.rows(), k, |i, j| self.left[(i, j)] * self.singulars[j]);
        let vk = self.right.block(0, 0, self.right.rows(), k);
        scaled.matmul(&vk.adjoint())
    }
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi.
pub fn svd(a: &CMatrix) -> Result<SvdFactorization> {
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    if a.rows() >= a.cols() {
        tall_svd(a)
    } else {
        // A^dagger = V S^dagger... swap roles; the full right basis of A is
        // the completed left basis of A^dagger.
        let t = tall_svd(&a.adjoint())?;
        let n = a.cols();
        let m = a.rows();
        let full_right = complete_basis(&t.left, n);
        Ok(SvdFactorization {
            left: t.right.block(0, 0, m, m),
            singulars: t.singulars,
            right: full_right,
        })
    }
}

fn tall_svd(a: &CMatrix) -> Result<SvdFactorization> {
    let m = a.rows();
    let n = a.cols();
    // columns of the working matrix, stored contiguously
    let mut u: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j).into_vec()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col = vec![ZERO; n];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    // columns below this squared norm are roundoff; rotating them never converges
    let negligible = (1e-15 * a.frobenius_norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = u[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = u[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = u[p].iter().zip(&u[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // rotate (u_p, e^{-i phi} u_q) by the real Jacobi rotation
                let cq = phase.conj();
                for cols in [&mut u, &mut v] {
                    let (lo, hi) = cols.split_at_mut(q);
                    let (xp, xq) = (&mut lo[p], &mut hi[0]);
                    for (x, y) in xp.iter_mut().zip(xq.iter_mut()) {
                        let yq = *y * cq;
                        let xn = *x * c - yq * s;
                        *y = *x * s + yq * c;
                        *x = xn;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence(MAX_SWEEPS));
    }

    let norms: Vec<f64> = u
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singulars: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let scale = singulars[0];

    let mut left_cols: Vec<CVector> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        if sigma > 1e-300 && sigma >= f64::EPSILON * scale * 1e-3 {
            let col: Vec<Complex64> = u[src].iter().map(|z| z / sigma).collect();
            left_cols.push(CVector { data: col });
        } else {
            left_cols.push(CVector::zeros(m));
            missing.push(k);
        }
    }
    let mut left = CMatrix::from_columns(&left_cols)?;
    if !missing.is_empty() {
        fill_orthonormal(&mut left, &missing);
    }
    let right = CMatrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Ok(SvdFactorization { left, singulars, right })
}

/// Replaces the listed columns of `q` with unit vectors orthogonal to all
/// other columns (modified Gram-Schmidt against the standard basis).
fn fill_orthonormal(q: &mut CMatrix, missing: &[usize]) {
    let m = q.rows();
    let mut filled: Vec<usize> = (0..q.cols()).filter(|k| !missing.contains(k)).collect();
    for &target in missing {
        for e in 0..m {
            let mut cand = CVector::basis(m, e);
            for _ in 0..2 {
                for &k in &filled {
                    let col = q.column(k);
                    let proj = col.dot(&cand);
                    cand = cand.sub(&col.scale(proj));
                }
            }
            let norm = cand.norm();
            if norm > 1e-8 {
                q.set_column(target, &cand.scale(Complex64::new(1.0 / norm, 0.0)));
                filled.push(target);
                break;
            }
        }
    }
}

/// Extends the orthonormal columns of `q` (`n x k`) to an `n x n` unitary.
fn complete_basis(q: &CMatrix, n: usize) -> CMatrix {
    let k = q.cols();
    let mut full = CMatrix::zeros(n, n);
    full.set_block(0, 0, q);
    let missing: Vec<usize> = (k..n).collect();
    fill_orthonormal(&mut full, &missing);
    full
}
