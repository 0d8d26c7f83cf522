//! Least squares and total least squares solvers for `A x ~ b`.
//!
//! The TLS solution is read off the right singular vector of the augmented
//! matrix `C = [A, b]` belonging to its smallest singular value, which is
//! also the ground state of `D = C^dagger C`. A second, independent route
//! solves `(A^dagger A - sigma^2 I) x = A^dagger b` directly; the two must
//! agree, and both are used as the reference for the simulated
//! resonance algorithms.

use num_complex::Complex64;
use rand_distr::StandardNormal;

use crate::numerics::{self, solve_hermitian, svd, CMatrix, CVector, LinalgError, SvdFactorization};

/// Relative singular-value cutoff for the pseudoinverse.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Minimum genericity margin, relative to the largest singular value of `C`.
pub const GENERICITY_TOL: f64 = 1e-10;
/// Below this `|v_{N+1,N+1}|` the TLS problem is treated as nongeneric.
pub const NONGENERIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("system is not overdetermined: M = {rows}, N = {cols} (need M > N >= 1)")]
    NotOverdetermined { rows: usize, cols: usize },
    #[error("b has length {actual}, A has {expected} rows")]
    DimMismatch { expected: usize, actual: usize },
    #[error("A is rank deficient (sigma_min / sigma_max = {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("genericity condition violated: margin sigma_bar_N - sigma_N+1 = {margin:e}")]
    GenericityViolated { margin: f64 },
    #[error("nongeneric TLS problem: |v_N+1,N+1| = {last:e}")]
    NonGeneric { last: f64 },
    #[error("zero vector where a direction is required")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, FitError>;

/// The overdetermined system `A x ~ b`, `A` of shape `M x N` with `M > N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    a: CMatrix,
    b: CVector,
}

impl FitProblem {
    pub fn new(a: CMatrix, b: CVector) -> Result<Self> {
        if a.rows() <= a.cols() {
            return Err(FitError::NotOverdetermined {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if b.dim() != a.rows() {
            return Err(FitError::DimMismatch {
                expected: a.rows(),
                actual: b.dim(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CVector {
        &self.b
    }

    /// Number of observations `M`.
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// Number of unknowns `N`.
    pub fn unknowns(&self) -> usize {
        self.a.cols()
    }

    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }

    /// Same system with `A` and `b` scaled by `gamma`.
    pub fn scaled(&self, gamma: f64) -> FitProblem {
        let g = Complex64::new(gamma, 0.0);
        Self {
            a: self.a.scale(g),
            b: self.b.scale(g),
        }
    }

    /// Random problem with independent standard normal entries; complex
    /// entries are circular with unit variance.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, complex: bool) -> Result<Self> {
        let mut draw = || {
            let re: f64 = rng.sample(StandardNormal);
            if complex {
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            } else {
                Complex64::new(re, 0.0)
            }
        };
        let a = CMatrix::from_fn(rows, cols, |_, _| draw());
        let b = CVector::new((0..rows).map(|_| draw()).collect())?;
        Self::new(a, b)
    }

    pub fn augmented(&self) -> AugmentedSystem {
        let (m, n) = (self.rows(), self.unknowns());
        let mut c = CMatrix::zeros(m, n + 1);
        c.set_block(0, 0, &self.a);
        c.set_column(n, &self.b);
        let d = c.gram();
        AugmentedSystem { c, d }
    }
}

/// `C = [A, b]` and its Gram matrix `D = C^dagger C`.
#[derive(Debug, Clone)]
pub struct AugmentedSystem {
    pub c: CMatrix,
    pub d: CMatrix,
}

#[derive(Debug, Clone)]
pub struct LsSolution {
    pub x: CVector,
}

#[derive(Debug, Clone)]
pub struct TlsSolution {
    pub x: CVector,
    /// Smallest singular value of `C`.
    pub sigma_min: f64,
    /// Unit right singular vector for `sigma_min`, last component real and negative.
    pub v_min: CVector,
    /// `sigma_bar_N - sigma_{N+1}`.
    pub genericity_margin: f64,
    /// Correction to `A`.
    pub e: CMatrix,
    /// Correction to `b`.
    pub f: CVector,
    /// Singular values of `C`, descending.
    pub singulars_c: Vec<f64>,
    /// Singular values of `A`, descending.
    pub singulars_a: Vec<f64>,
}

impl TlsSolution {
    /// `||[E, f]||_F`.
    pub fn correction_norm(&self) -> f64 {
        (self.e.frobenius_norm().powi(2) + self.f.norm_sqr()).sqrt()
    }
}

fn check_rank(f: &SvdFactorization) -> Result<()> {
    let ratio = if f.largest() > 0.0 {
        f.smallest() / f.largest()
    } else {
        0.0
    };
    if ratio <= RANK_CUTOFF {
        return Err(FitError::RankDeficient { ratio });
    }
    Ok(())
}

/// Moore-Penrose pseudoinverse `(A^dagger A)^{-1} A^dagger` of a full
/// column rank matrix, via its SVD.
pub fn pseudoinverse(a: &CMatrix) -> Result<CMatrix> {
    let f = svd(a)?;
    check_rank(&f)?;
    let k = f.singulars.len();
    let v_scaled = CMatrix::from_fn(a.cols(), k, |i, j| f.right[(i, j)] / f.singulars[j]);
    Ok(v_scaled.matmul(&f.left.adjoint()))
}

/// Least squares solution through the SVD pseudoinverse.
pub fn ls_solve(p: &FitProblem) -> Result<LsSolution> {
    let f = svd(&p.a)?;
    check_rank(&f)?;
    let coeffs = f.left.adjoint_mul_vec(&p.b);
    let mut x = CVector::zeros(p.unknowns());
    for (k, &sigma) in f.singulars.iter().enumerate() {
        let w = coeffs[k] / sigma;
        for i in 0..p.unknowns() {
            x[i] += f.right[(i, k)] * w;
        }
    }
    Ok(LsSolution { x })
}

/// Total least squares solution from the SVD of `C = [A, b]`.
pub fn tls_solve(p: &FitProblem) -> Result<TlsSolution> {
    let n = p.unknowns();
    let aug = p.augmented();
    let fc = svd(&aug.c)?;
    let fa = svd(&p.a)?;
    let sigma_min = fc.singulars[n];
    let margin = fa.singulars[n - 1] - sigma_min;
    if margin <= GENERICITY_TOL * fc.largest() {
        return Err(FitError::GenericityViolated { margin });
    }

    let v = fc.right_vector(n);
    let last = v[n];
    if last.norm() < NONGENERIC_TOL {
        return Err(FitError::NonGeneric { last: last.norm() });
    }
    // fix the phase so that v ∝ (x; -1)
    let mut v_min = v.scale(-last.norm() / last);
    v_min[n] = Complex64::new(-last.norm(), 0.0);
    let denom = v_min[n];
    let x = CVector::new((0..n).map(|i| -v_min[i] / denom).collect())?;

    // [E, f] = -(C v) v^dagger, the rank-one correction annihilating v
    let cv = aug.c.mul_vec(&v_min);
    let correction = CMatrix::from_fn(p.rows(), n + 1, |i, j| -cv[i] * v_min[j].conj());
    let e = correction.block(0, 0, p.rows(), n);
    let f = correction.column(n);

    Ok(TlsSolution {
        x,
        sigma_min,
        v_min,
        genericity_margin: margin,
        e,
        f,
        singulars_c: fc.singulars,
        singulars_a: fa.singulars,
    })
}

/// `x = (A^dagger A - sigma^2 I)^{-1} A^dagger b`.
pub fn tls_closed_form(p: &FitProblem, sigma_min: f64) -> Result<CVector> {
    let n = p.unknowns();
    let mut shifted = p.a.gram();
    let s2 = Complex64::new(sigma_min * sigma_min, 0.0);
    for i in 0..n {
        shifted[(i, i)] -= s2;
    }
    let rhs = p.a.adjoint_mul_vec(&p.b);
    Ok(solve_hermitian(&shifted, &rhs)?)
}

/// Both sides of `||x_TLS - x_LS|| / ||x_TLS|| <= (sigma_{N+1} / sigma_bar_N)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-10
    }
}

pub fn ls_tls_bound(p: &FitProblem) -> Result<BoundReport> {
    let tls = tls_solve(p)?;
    let ls = ls_solve(p)?;
    let xn = tls.x.norm();
    if xn == 0.0 {
        return Err(FitError::ZeroVector);
    }
    let lhs = tls.x.sub(&ls.x).norm() / xn;
    let ratio = tls.sigma_min / tls.singulars_a[p.unknowns() - 1];
    Ok(BoundReport {
        lhs,
        rhs: ratio * ratio,
    })
}

/// `||(x_TLS - x_LS) - sigma_{N+1}^2 (A^dagger A)^{-1} x_TLS||_2`.
pub fn ls_tls_identity_residual(p: &FitProblem) -> Result<f64> {
    let tls = tls_solve(p)?;
    let ls = ls_solve(p)?;
    let correction = solve_hermitian(&p.a.gram(), &tls.x)?;
    let s2 = Complex64::new(tls.sigma_min * tls.sigma_min, 0.0);
    Ok(tls.x.sub(&ls.x).sub(&correction.scale(s2)).norm())
}

/// Squared overlap between the unit vectors along `b` and `A x`, in `[0, 1]`.
///
/// This is the quantity a SWAP test between `|b>` and the state
/// proportional to `A x` would estimate; it is invariant to the scale of
/// both `b` and `x`.
pub fn fit_quality(p: &FitProblem, x: &CVector) -> Result<f64> {
    if x.dim() != p.unknowns() {
        return Err(FitError::DimMismatch {
            expected: p.unknowns(),
            actual: x.dim(),
        });
    }
    let b_hat = p.b.normalized().ok_or(FitError::ZeroVector)?;
    if x.norm() == 0.0 {
        return Err(FitError::ZeroVector);
    }
    let ax = p.a.mul_vec(x).normalized().ok_or(FitError::ZeroVector)?;
    Ok(b_hat.dot(&ax).norm_sqr().min(1.0))
}

/// Singular values of `C` and `A` side by side, for checking
/// `sigma_1 >= sigma_bar_1 >= sigma_2 >= ... >= sigma_bar_N >= sigma_{N+1}`.
pub fn interlacing_chain(p: &FitProblem) -> Result<Vec<f64>> {
    let sc = numerics::svd(&p.augmented().c)?.singulars;
    let sa = numerics::svd(&p.a)?.singulars;
    let mut chain = Vec::with_capacity(sc.len() + sa.len());
    for k in 0..sa.len() {
        chain.push(sc[k]);
        chain.push(sa[k]);
    }
    chain.push(sc[sa.len()]);
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn problem(a: &[&[f64]], b: &[f64]) -> FitProblem {
        FitProblem::new(CMatrix::from_real_rows(a).unwrap(), CVector::from_real(b).unwrap()).unwrap()
    }

    #[test]
    fn rejects_square_and_mismatched() {
        let a = CMatrix::identity(2);
        assert!(matches!(
            FitProblem::new(a, CVector::zeros(2)),
            Err(FitError::NotOverdetermined { .. })
        ));
        let a = CMatrix::zeros(3, 1);
        assert!(matches!(
            FitProblem::new(a, CVector::zeros(2)),
            Err(FitError::DimMismatch { .. })
        ));
    }

    #[test]
    fn ls_examples() {
        let x = ls_solve(&problem(&[&[1.0], &[0.0]], &[1.0, 0.0])).unwrap().x;
        assert_abs_diff_eq!(x[0].re, 1.0, epsilon = 1e-15);
        let x = ls_solve(&problem(&[&[1.0], &[1.0]], &[1.0, 0.0])).unwrap().x;
        assert_abs_diff_eq!(x[0].re, 0.5, epsilon = 1e-15);
        let p = problem(
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]],
            &[1.0, 2.0, 3.0, 0.0],
        );
        let x = ls_solve(&p).unwrap().x;
        for (i, want) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert_abs_diff_eq!(x[i].re, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn ls_rank_deficient() {
        let p = problem(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]], &[1.0, 0.0, 0.0]);
        assert!(matches!(ls_solve(&p), Err(FitError::RankDeficient { .. })));
    }

    #[test]
    fn tls_consistent_system() {
        let sol = tls_solve(&problem(&[&[1.0], &[0.0]], &[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(sol.x[0].re, 1.0, epsilon = 1e-14);
        assert!(sol.sigma_min < 1e-15);
        assert!(sol.e.max_abs() < 1e-15 && sol.f.max_abs() < 1e-15);
    }

    #[test]
    fn tls_golden_ratio_example() {
        let sol = tls_solve(&problem(&[&[1.0], &[1.0]], &[1.0, 0.0])).unwrap();
        let s5 = 5f64.sqrt();
        assert_abs_diff_eq!(sol.x[0].re, (s5 - 1.0) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.sigma_min.powi(2), (3.0 - s5) / 2.0, epsilon = 1e-14);
        assert!(sol.v_min[1].re < 0.0 && sol.v_min[1].im == 0.0);
        assert_abs_diff_eq!(sol.correction_norm(), sol.sigma_min, epsilon = 1e-14);
    }

    #[test]
    fn tls_degenerate_is_rejected() {
        let err = tls_solve(&problem(&[&[1.0], &[0.0]], &[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, FitError::GenericityViolated { margin } if margin.abs() < 1e-12));
    }

    #[test]
    fn closed_form_examples() {
        let p = problem(&[&[1.0], &[1.0]], &[1.0, 0.0]);
        let s2 = (3.0 - 5f64.sqrt()) / 2.0;
        let x = tls_closed_form(&p, s2.sqrt()).unwrap();
        assert_abs_diff_eq!(x[0].re, 1.0 / (2.0 - s2), epsilon = 1e-14);
        assert_abs_diff_eq!(x[0].re, 0.6180339887498949, epsilon = 1e-14);

        let x = tls_closed_form(&problem(&[&[2.0], &[0.0]], &[0.0, 1.0]), 1.0).unwrap();
        assert_abs_diff_eq!(x[0].norm(), 0.0, epsilon = 1e-15);

        let p = problem(&[&[1.0, 0.5], &[0.0, 1.0], &[2.0, 1.0]], &[1.0, 2.0, 3.0]);
        let ls = ls_solve(&p).unwrap().x;
        let cf = tls_closed_form(&p, 0.0).unwrap();
        assert!(ls.sub(&cf).norm() < 1e-12);
    }

    #[test]
    fn closed_form_singular_shift() {
        // A^dagger A = 4, shift by sigma = 2 makes it singular
        let p = problem(&[&[2.0], &[0.0]], &[0.0, 1.0]);
        assert!(matches!(
            tls_closed_form(&p, 2.0),
            Err(FitError::Linalg(LinalgError::Singular { .. }))
        ));
    }

    #[test]
    fn bound_examples() {
        let r = ls_tls_bound(&problem(&[&[1.0], &[0.0]], &[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs, 0.0, epsilon = 1e-14);

        let r = ls_tls_bound(&problem(&[&[1.0], &[1.0]], &[1.0, 0.0])).unwrap();
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        assert_abs_diff_eq!(r.lhs, (phi - 0.5) / phi, epsilon = 1e-13);
        assert_abs_diff_eq!(r.rhs, (3.0 - 5f64.sqrt()) / 4.0, epsilon = 1e-13);
        assert!(r.holds());
    }

    #[test]
    fn identity_residual_examples() {
        let r = ls_tls_identity_residual(&problem(&[&[1.0], &[0.0]], &[1.0, 0.0])).unwrap();
        assert!(r < 1e-14);
        let p = problem(&[&[1.0], &[1.0]], &[1.0, 0.0]);
        let tls = tls_solve(&p).unwrap();
        let ls = ls_solve(&p).unwrap();
        // difference equals sigma^2 * (1/2) * x_tls
        let diff = tls.x[0].re - ls.x[0].re;
        assert_abs_diff_eq!(diff, tls.sigma_min.powi(2) * 0.5 * tls.x[0].re, epsilon = 1e-10);
        assert_abs_diff_eq!(diff, 0.1180339887498949, epsilon = 1e-10);
        assert!(ls_tls_identity_residual(&p).unwrap() < 1e-14);
    }

    #[test]
    fn fit_quality_examples() {
        let p = problem(
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]],
            &[1.0, 2.0, 3.0, 0.0],
        );
        let x = CVector::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(fit_quality(&p, &x).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            fit_quality(&p, &x.scale(Complex64::new(0.0, 7.0))).unwrap(),
            1.0,
            epsilon = 1e-15
        );

        let p = problem(&[&[1.0], &[0.0]], &[0.0, 1.0]);
        assert_eq!(fit_quality(&p, &CVector::from_real(&[1.0]).unwrap()).unwrap(), 0.0);
        assert_eq!(fit_quality(&p, &CVector::zeros(1)), Err(FitError::ZeroVector));
        let p = problem(&[&[1.0], &[0.0]], &[0.0, 0.0]);
        assert_eq!(
            fit_quality(&p, &CVector::from_real(&[1.0]).unwrap()),
            Err(FitError::ZeroVector)
        );
    }

    #[test]
    fn pseudoinverse_ignores_zero_rows() {
        let a = CMatrix::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
        let padded = CMatrix::from_real_rows(&[&[1.0], &[1.0], &[0.0]]).unwrap();
        let p1 = pseudoinverse(&a).unwrap();
        let p2 = pseudoinverse(&padded).unwrap();
        assert_abs_diff_eq!(p1[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert!(p1.sub(&p2.block(0, 0, 1, 2)).max_abs() < 1e-15);
        assert!(p2[(0, 2)].norm() < 1e-15);
    }

    /// Smallest `||[E, f]||_F` with `(A + E) x = b + f` for a fixed `x`:
    /// the minimum-norm solution of `[E, f] (x; -1) = b - A x`.
    fn min_correction_for(p: &FitProblem, x: &CVector) -> f64 {
        let r = p.b().sub(&p.a().mul_vec(x));
        r.norm() / (1.0 + x.norm_sqr()).sqrt()
    }

    /// Grid search over real `x`, then refinement of the grid around the best cell.
    fn grid_minimum(p: &FitProblem, center: &[f64]) -> f64 {
        let n = center.len();
        let mut best = center.to_vec();
        let mut best_val = f64::INFINITY;
        let mut half_width = 2.0;
        let steps = if n == 1 { 400 } else { 60 };
        for _ in 0..6 {
            let h = 2.0 * half_width / steps as f64;
            let origin = best.clone();
            let total = (steps + 1usize).pow(n as u32);
            for idx in 0..total {
                let mut k = idx;
                let mut x = vec![0.0; n];
                for xi in x.iter_mut().zip(&origin) {
                    *xi.0 = xi.1 - half_width + h * (k % (steps + 1)) as f64;
                    k /= steps + 1;
                }
                let val = min_correction_for(p, &CVector::from_real(&x).unwrap());
                if val < best_val {
                    best_val = val;
                    best = x;
                }
            }
            half_width = 2.0 * h;
        }
        best_val
    }

    #[test]
    fn correction_matches_brute_force() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (m, n) in [(3, 1), (4, 2), (3, 1), (4, 2)] {
            let p = FitProblem::random(&mut rng, m, n, false).unwrap();
            let sol = tls_solve(&p).unwrap();
            assert_abs_diff_eq!(
                sol.correction_norm(),
                sol.sigma_min,
                epsilon = 1e-9 * sol.sigma_min.max(1.0)
            );
            let center: Vec<f64> = sol.x.iter().map(|z| z.re).collect();
            let brute = grid_minimum(&p, &center);
            assert!(
                brute >= sol.sigma_min - 1e-12,
                "grid beat the optimum: {brute} < {}",
                sol.sigma_min
            );
            assert!(brute - sol.sigma_min < 1e-8, "{brute} vs {}", sol.sigma_min);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        fn random(seed: u64, m: usize, n: usize, complex: bool) -> FitProblem {
            FitProblem::random(&mut ChaCha8Rng::seed_from_u64(seed), m, n, complex).unwrap()
        }

        fn dims() -> impl Strategy<Value = (usize, usize)> {
            (1usize..=6).prop_flat_map(|n| (n + 1..=24usize, Just(n)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn routes_agree(seed in any::<u64>(), (m, n) in dims(), complex in any::<bool>()) {
                let p = random(seed, m, n, complex);
                let sol = tls_solve(&p).unwrap();
                let cf = tls_closed_form(&p, sol.sigma_min).unwrap();
                prop_assert!(sol.x.sub(&cf).norm() <= 1e-9 * sol.x.norm());
            }

            #[test]
            fn solution_invariants(seed in any::<u64>(), (m, n) in dims(), complex in any::<bool>()) {
                let p = random(seed, m, n, complex);
                let sol = tls_solve(&p).unwrap();
                prop_assert!((sol.v_min.norm() - 1.0).abs() <= 1e-12);
                prop_assert!(sol.v_min[n].im == 0.0 && sol.v_min[n].re < 0.0);
                prop_assert!((sol.correction_norm() - sol.sigma_min).abs() <= 1e-9 * sol.sigma_min);
                let lhs = p.a().add(&sol.e).mul_vec(&sol.x);
                let rhs = p.b().add(&sol.f);
                prop_assert!(lhs.sub(&rhs).norm() <= 1e-8 * p.augmented().c.frobenius_norm());
                let ls = ls_solve(&p).unwrap();
                let normal = p.a().adjoint_mul_vec(&p.a().mul_vec(&ls.x).sub(p.b()));
                prop_assert!(normal.norm() <= 1e-8 * p.a().adjoint_mul_vec(p.b()).norm());
            }

            #[test]
            fn bound_and_identity(seed in any::<u64>(), (m, n) in dims(), complex in any::<bool>()) {
                let p = random(seed, m, n, complex);
                prop_assert!(ls_tls_bound(&p).unwrap().holds());
                let x = tls_solve(&p).unwrap().x;
                prop_assert!(ls_tls_identity_residual(&p).unwrap() <= 1e-9 * x.norm());
            }

            #[test]
            fn scaling_covariance(seed in any::<u64>(), (m, n) in dims(), gamma in 1e-3f64..1e3) {
                let p = random(seed, m, n, true);
                let base = tls_solve(&p).unwrap();
                let scaled = tls_solve(&p.scaled(gamma)).unwrap();
                prop_assert!((scaled.sigma_min - gamma * base.sigma_min).abs() <= 1e-9 * gamma * base.sigma_min);
                prop_assert!(scaled.x.sub(&base.x).norm() <= 1e-9 * base.x.norm());
            }

            #[test]
            fn interlacing(seed in any::<u64>(), (m, n) in dims(), complex in any::<bool>()) {
                let chain = interlacing_chain(&random(seed, m, n, complex)).unwrap();
                prop_assert_eq!(chain.len(), 2 * n + 1);
                for w in chain.windows(2) {
                    prop_assert!(w[0] >= w[1] - 1e-10, "{:?}", chain);
                }
            }

            #[test]
            fn fit_quality_in_unit_interval(seed in any::<u64>(), (m, n) in dims(), s in 1e-3f64..1e3) {
                let p = random(seed, m, n, true);
                let x = tls_solve(&p).unwrap().x;
                let q = fit_quality(&p, &x).unwrap();
                prop_assert!((0.0..=1.0).contains(&q));
                let q2 = fit_quality(&p.scaled(s), &x.scale(Complex64::new(0.0, s))).unwrap();
                prop_assert!((q - q2).abs() <= 1e-12);
            }
        }
    }
}
