use num_complex::Complex64;

use super::{LinalgError, Result, ZERO};

const MAX_QR_ITERATIONS_PER_ROOT: usize = 60;
const POLISH_STEPS: usize = 3;

/// Evaluates `sum_k coeffs[k] z^k` by Horner's rule.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Roots of a monic polynomial, coefficients in ascending order
/// (`coeffs[degree] == 1`).
///
/// Computes the eigenvalues of the balanced companion matrix with shifted
/// complex QR, then polishes each root with a few guarded Newton steps on
/// the original polynomial. Root order is unspecified.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    if coeffs.len() < 2 || (coeffs[coeffs.len() - 1] - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
        return Err(LinalgError::NotMonic);
    }
    let n = coeffs.len() - 1;
    if n == 1 {
        return Ok(vec![-coeffs[0]]);
    }

    // Frobenius companion: ones on the subdiagonal, -a_i down the last column.
    let mut h = vec![vec![ZERO; n]; n];
    for i in 0..n {
        h[i][n - 1] = -coeffs[i];
        if i + 1 < n {
            h[i + 1][i] = Complex64::new(1.0, 0.0);
        }
    }
    balance(&mut h);
    let mut roots = hessenberg_eigenvalues(h)?;

    let deriv: Vec<Complex64> = (1..=n).map(|k| coeffs[k] * k as f64).collect();
    for root in roots.iter_mut() {
        let mut z = *root;
        let mut pz = eval_poly(coeffs, z).norm();
        for _ in 0..POLISH_STEPS {
            let dp = eval_poly(&deriv, z);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = z - eval_poly(coeffs, z) / dp;
            let pc = eval_poly(coeffs, cand).norm();
            if pc.is_finite() && pc < pz {
                z = cand;
                pz = pc;
            } else {
                break;
            }
        }
        *root = z;
    }
    Ok(roots)
}

/// Parlett-Reinsch balancing by powers of two.
fn balance(a: &mut [Vec<Complex64>]) {
    let n = a.len();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].norm();
                    r += a[i][j].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / radix;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[i][j] *= g;
                }
                for row in a.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            eigenvalues.push(h[0][0]);
            break;
        }
        let mut l = hi;
        while l > 0 {
            let scale = h[l - 1][l - 1].norm() + h[l][l].norm();
            if h[l][l - 1].norm() <= f64::EPSILON * scale || h[l][l - 1].norm() < f64::MIN_POSITIVE {
                h[l][l - 1] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eigenvalues.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_QR_ITERATIONS_PER_ROOT {
            return Err(LinalgError::NoConvergence(MAX_QR_ITERATIONS_PER_ROOT));
        }

        let mu = if iter.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[hi][hi] + Complex64::new(0.75, 0.4) * h[hi][hi - 1].norm()
        } else {
            let a = h[hi - 1][hi - 1];
            let b = h[hi - 1][hi];
            let c = h[hi][hi - 1];
            let d = h[hi][hi];
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };

        for k in l..=hi {
            h[k][k] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), ZERO)
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let top = h[k][j];
                let bot = h[k + 1][j];
                h[k][j] = c.conj() * top + s.conj() * bot;
                h[k + 1][j] = -s * top + c * bot;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = l + offset;
            for row in h.iter_mut().take((k + 1).min(hi) + 1).skip(l) {
                let left = row[k];
                let right = row[k + 1];
                row[k] = left * c + right * s;
                row[k + 1] = -left * s.conj() + right * c.conj();
            }
        }
        for k in l..=hi {
            h[k][k] += mu;
        }
    }
    Ok(eigenvalues)
}
