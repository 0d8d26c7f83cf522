use num_complex::Complex64;

use super::{CMatrix, CVector, LinalgError, Result, ONE, ZERO};

const MAX_QL_ITERATIONS: usize = 60;
const MAX_JACOBI_SWEEPS: usize = 100;

/// Full eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl HermEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k)
    }

    /// Largest `||H v_k - lambda_k v_k||_2 / (1 + |lambda_k|)` over all pairs.
    pub fn max_residual(&self, h: &CMatrix) -> f64 {
        (0..self.dim())
            .map(|k| {
                let v = self.eigenvector(k);
                let lam = self.eigenvalues[k];
                let r = h.mul_vec(&v).sub(&v.scale(Complex64::new(lam, 0.0)));
                r.norm() / (1.0 + lam.abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is checked for Hermiticity (relative tolerance
/// [`super::HERMITIAN_TOL`]), symmetrized, reduced to tridiagonal form
/// by Householder reflections and diagonalized by implicit QL.
/// Eigenvalues come back ascending. Within a degenerate cluster the basis
/// is arbitrary.
pub fn hermitian_eig(h: &CMatrix) -> Result<HermEig> {
    let t = Tridiagonal::decompose(h)?;
    let n = t.n;
    let mut vectors = CMatrix::zeros(n, n);
    let mut coeffs = vec![ZERO; n];
    for k in 0..n {
        coeffs.fill(ZERO);
        coeffs[k] = ONE;
        let col = t.to_standard_basis(&coeffs);
        for i in 0..n {
            vectors[(i, k)] = col[i];
        }
    }
    Ok(HermEig {
        eigenvalues: t.eigenvalues.clone(),
        eigenvectors: vectors,
    })
}

/// Cyclic complex Jacobi eigendecomposition.
///
/// Slower than [`hermitian_eig`] but built on an unrelated algorithm, which
/// makes it the reference the tridiagonal path is tested against.
pub fn jacobi_eig(h: &CMatrix) -> Result<HermEig> {
    h.check_hermitian()?;
    let n = h.rows();
    let mut a = h.symmetrized();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = scale == 0.0;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 || mag <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let zeta = (aqq - app) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence(MAX_JACOBI_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermEig {
        eigenvalues,
        eigenvectors,
    })
}

struct Reflector {
    /// First index the reflector acts on.
    start: usize,
    v: Vec<Complex64>,
    tau: f64,
}

impl Reflector {
    /// `y <- (I - tau v v^dagger) y`
    fn apply(&self, y: &mut [Complex64]) {
        let tail = &mut y[self.start..];
        let proj: Complex64 = self.v.iter().zip(tail.iter()).map(|(v, y)| v.conj() * y).sum();
        let f = proj * self.tau;
        for (y, v) in tail.iter_mut().zip(&self.v) {
            *y -= v * f;
        }
    }
}

/// Factored spectral decomposition `H = Q P Z diag(lambda) Z^T P^dagger Q^dagger`.
///
/// `Q` is a product of Householder reflectors, `P` a diagonal phase matrix
/// that makes the tridiagonal form real, and `Z` the real orthogonal
/// eigenvector matrix of that tridiagonal. Keeping the factors lets a
/// vector be moved in and out of the eigenbasis in `O(n^2)` without ever
/// assembling the eigenvectors.
pub(crate) struct Tridiagonal {
    pub(crate) n: usize,
    reflectors: Vec<Reflector>,
    phases: Vec<Complex64>,
    pub(crate) eigenvalues: Vec<f64>,
    /// Row `k` holds eigenvector `k` of the real tridiagonal.
    zt: Vec<f64>,
}

impl Tridiagonal {
    pub(crate) fn decompose(h: &CMatrix) -> Result<Self> {
        h.check_hermitian()?;
        let n = h.rows();
        let mut a: Vec<Complex64> = h.symmetrized().as_slice().to_vec();
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        let mut diag = vec![0.0; n];
        let mut sub = vec![ZERO; n];

        let mut p = vec![ZERO; n];
        for k in 0..n.saturating_sub(1) {
            let start = k + 1;
            let m = n - start;
            let x0 = a[start * n + k];
            let tail_sqr: f64 = (start + 1..n).map(|i| a[i * n + k].norm_sqr()).sum();
            if tail_sqr == 0.0 {
                sub[k] = x0;
                continue;
            }
            let xnorm = (x0.norm_sqr() + tail_sqr).sqrt();
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
            let alpha = -phase * xnorm;
            let mut v: Vec<Complex64> = (start..n).map(|i| a[i * n + k]).collect();
            v[0] -= alpha;
            let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let tau = 2.0 / vnorm_sqr;

            // p = tau * A22 v
            for i in 0..m {
                let row = &a[(start + i) * n + start..(start + i + 1) * n];
                let acc: Complex64 = row.iter().zip(&v).map(|(a, v)| a * v).sum();
                p[i] = acc * tau;
            }
            let vp: Complex64 = v.iter().zip(&p[..m]).map(|(v, p)| v.conj() * p).sum();
            let kappa = 0.5 * tau * vp.re;
            for i in 0..m {
                p[i] -= v[i] * kappa;
            }
            // A22 -= v w^dagger + w v^dagger, with w stored in p
            for i in 0..m {
                let vi = v[i];
                let wi = p[i];
                let row = &mut a[(start + i) * n + start..(start + i + 1) * n];
                for ((aij, vj), wj) in row.iter_mut().zip(&v).zip(&p[..m]) {
                    *aij -= vi * wj.conj() + wi * vj.conj();
                }
            }
            sub[k] = alpha;
            reflectors.push(Reflector { start, v, tau });
        }
        for (i, d) in diag.iter_mut().enumerate() {
            *d = a[i * n + i].re;
        }

        let mut phases = vec![ONE; n];
        let mut off = vec![0.0; n];
        for k in 0..n.saturating_sub(1) {
            let e = sub[k];
            let mag = e.norm();
            off[k] = mag;
            phases[k + 1] = if mag > 0.0 { phases[k] * (e / mag) } else { phases[k] };
        }

        let mut zt = vec![0.0; n * n];
        for i in 0..n {
            zt[i * n + i] = 1.0;
        }
        tridiagonal_ql(&mut diag, &mut off, &mut zt, n)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let mut sorted = vec![0.0; n * n];
        for (dst, &src) in order.iter().enumerate() {
            sorted[dst * n..(dst + 1) * n].copy_from_slice(&zt[src * n..(src + 1) * n]);
        }

        Ok(Self {
            n,
            reflectors,
            phases,
            eigenvalues,
            zt: sorted,
        })
    }

    /// Coefficients of `psi` in the eigenbasis, `V^dagger psi`.
    pub(crate) fn to_eigenbasis(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut u = psi.to_vec();
        for r in &self.reflectors {
            r.apply(&mut u);
        }
        for (ui, p) in u.iter_mut().zip(&self.phases) {
            *ui *= p.conj();
        }
        (0..n)
            .map(|k| self.zt[k * n..(k + 1) * n].iter().zip(&u).map(|(z, u)| u * z).sum())
            .collect()
    }

    /// `V c` for eigenbasis coefficients `c`.
    pub(crate) fn to_standard_basis(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = vec![ZERO; n];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            for (yi, &z) in y.iter_mut().zip(&self.zt[k * n..(k + 1) * n]) {
                *yi += c * z;
            }
        }
        for (yi, p) in y.iter_mut().zip(&self.phases) {
            *yi *= p;
        }
        for r in self.reflectors.iter().rev() {
            r.apply(&mut y);
        }
        y
    }
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal.
///
/// `d` is the diagonal, `e[i]` couples `i` and `i + 1` (`e[n-1]` unused).
/// Rotations are accumulated into the rows of `zt`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], zt: &mut [f64], n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // off-diagonals below roundoff of the whole matrix are dropped even when
    // the neighbouring diagonal entries are tiny
    let anorm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= 0.5 * f64::EPSILON * anorm {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(LinalgError::NoConvergence(MAX_QL_ITERATIONS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (lo, hi) = zt.split_at_mut((i + 1) * n);
                let zi = &mut lo[i * n..];
                let zi1 = &mut hi[..n];
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        // small LCG keeps this test module dependency-free
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let h = CMatrix::from_diag(&[Complex64::new(3.0, 0.0), ONE, Complex64::new(2.0, 0.0)]);
        let eig = hermitian_eig(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 3.0]);
        // eigenvector k is a standard basis vector up to phase
        for (k, &row) in [1usize, 2, 0].iter().enumerate() {
            assert_abs_diff_eq!(eig.eigenvectors[(row, k)].norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let h = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        let s5 = 5f64.sqrt();
        assert_abs_diff_eq!(eig.eigenvalues[0], (3.0 - s5) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], (3.0 + s5) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let eig = hermitian_eig(&CMatrix::zeros(4, 4)).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l == 0.0));
        assert!(eig.eigenvectors.unitarity_defect() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&h), Err(LinalgError::NotHermitian { .. })));
        assert!(matches!(jacobi_eig(&h), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn one_by_one() {
        let h = CMatrix::from_real_rows(&[&[-4.5]]).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![-4.5]);
    }

    #[test]
    fn invariants_on_random_complex_matrices() {
        for (n, seed) in [(2, 1), (5, 2), (17, 3), (40, 4)] {
            let h = random_hermitian(n, seed);
            let eig = hermitian_eig(&h).unwrap();
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert!(eig.eigenvectors.unitarity_defect() < 1e-10);
            assert!(eig.max_residual(&h) < 1e-9);
        }
    }

    #[test]
    fn tridiagonal_and_jacobi_agree() {
        for (n, seed) in [(3, 10), (8, 11), (24, 12)] {
            let h = random_hermitian(n, seed);
            let a = hermitian_eig(&h).unwrap();
            let b = jacobi_eig(&h).unwrap();
            assert!(b.eigenvectors.unitarity_defect() < 1e-10);
            assert!(b.max_residual(&h) < 1e-9);
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn eigenbasis_round_trip() {
        let h = random_hermitian(9, 99);
        let t = Tridiagonal::decompose(&h).unwrap();
        let psi: Vec<Complex64> = (0..9).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let back = t.to_standard_basis(&t.to_eigenbasis(&psi));
        for (a, b) in back.iter().zip(&psi) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
