//! Dense complex linear algebra.
//!
//! Everything downstream (fitting, Hamiltonian assembly, time evolution)
//! runs on the two containers defined here, [`CVector`] and [`CMatrix`],
//! and on the factorizations in the submodules. Matrices are stored
//! row-major. All operations are pure.

#![allow(clippy::needless_range_loop)]

mod eigen;
mod poly;
mod propagator;
mod solve;
mod svd;
pub mod text;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

pub use eigen::{hermitian_eig, jacobi_eig, HermEig};
pub use poly::{eval_poly, poly_roots};
pub use propagator::{expm_unitary, SpectralPropagator};
pub use solve::solve_hermitian;
pub use svd::{svd, SvdFactorization};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e}, scale {scale:e})")]
    NotHermitian { asymmetry: f64, scale: f64 },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error("matrix is singular to working precision (|lambda|min/|lambda|max = {ratio:e})")]
    Singular { ratio: f64 },
    #[error("empty matrix or vector")]
    Empty,
    #[error("polynomial must be monic with degree >= 1")]
    NotMonic,
    #[error("iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite)
    }
}

/// Complex column vector.
#[derive(Clone, PartialEq)]
pub struct CVector {
    data: Vec<Complex64>,
}

impl CVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(LinalgError::Empty);
        }
        check_finite(&data)?;
        Ok(Self { data })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self { data: vec![ZERO; dim] }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.data.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn dot(&self, other: &CVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dot: dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, factor: Complex64) -> CVector {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Unit vector in the direction of `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<CVector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn add(&self, other: &CVector) -> CVector {
        assert_eq!(self.dim(), other.dim(), "add: dimension mismatch");
        Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        assert_eq!(self.dim(), other.dim(), "sub: dimension mismatch");
        Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Copy of `self` zero-padded (or truncated) to `dim` entries.
    pub fn resized(&self, dim: usize) -> CVector {
        let mut data = self.data.clone();
        data.resize(dim, ZERO);
        Self { data }
    }

    pub fn head(&self, len: usize) -> CVector {
        Self {
            data: self.data[..len].to_vec(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.data).finish()
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimMismatch {
                expected: c,
                actual: rows.iter().map(|row| row.len()).find(|&l| l != c).unwrap_or(0),
            });
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(r, c, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, CVector::dim);
        if cols == 0 || rows == 0 {
            return Err(LinalgError::Empty);
        }
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.dim() != rows {
                return Err(LinalgError::DimMismatch {
                    expected: rows,
                    actual: col.dim(),
                });
            }
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector {
            data: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn set_column(&mut self, j: usize, v: &CVector) {
        assert_eq!(v.dim(), self.rows, "set_column: dimension mismatch");
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Copy of the block with top-left corner `(r0, c0)` and shape `rows x cols`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Writes `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &CMatrix) {
        for i in 0..src.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(i));
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul: inner dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim(), "mul_vec: dimension mismatch");
        CVector {
            data: (0..self.rows)
                .map(|i| self.row(i).iter().zip(&v.data).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }

    /// `self^dagger * v` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.rows, v.dim(), "adjoint_mul_vec: dimension mismatch");
        let mut out = vec![ZERO; self.cols];
        for (i, &vi) in v.data.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
        CVector { data: out }
    }

    /// `self^dagger * self`.
    pub fn gram(&self) -> CMatrix {
        let n = self.cols;
        let mut g = CMatrix::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ai = row[i].conj();
                if ai == ZERO {
                    continue;
                }
                for j in 0..n {
                    g.data[i * n + j] += ai * row[j];
                }
            }
        }
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise `|H - H^dagger|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows.min(self.cols) {
            for j in i..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Checks Hermiticity against [`HERMITIAN_TOL`] relative to the largest entry.
    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        check_finite(&self.data)?;
        let scale = self.max_abs();
        let asymmetry = self.hermitian_defect();
        if asymmetry > HERMITIAN_TOL * scale {
            return Err(LinalgError::NotHermitian { asymmetry, scale });
        }
        Ok(())
    }

    /// `(H + H^dagger) / 2`.
    pub fn symmetrized(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Largest elementwise deviation of `self^dagger self` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.gram();
        let mut worst: f64 = 0.0;
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let bad = vec![ONE, Complex64::new(f64::NAN, 0.0)];
        assert_eq!(CMatrix::new(1, 2, bad.clone()), Err(LinalgError::NonFinite));
        assert_eq!(CVector::new(bad), Err(LinalgError::NonFinite));
    }

    #[test]
    fn rejects_wrong_entry_count() {
        assert!(matches!(
            CMatrix::new(2, 2, vec![ONE; 3]),
            Err(LinalgError::DimMismatch { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn gram_matches_adjoint_product() {
        let a = CMatrix::from_fn(4, 3, |i, j| Complex64::new(i as f64 - j as f64, (i * j) as f64 * 0.5));
        let direct = a.adjoint().matmul(&a);
        assert!(direct.sub(&a.gram()).max_abs() < 1e-14);
    }

    #[test]
    fn hermitian_check_is_relative() {
        let mut h = CMatrix::from_real_rows(&[&[1e6, 2.0], &[2.0, 3.0]]).unwrap();
        h[(0, 1)] = Complex64::new(2.0, 1e-6);
        // asymmetry 2e-6 against scale 1e6 sits inside the relative tolerance
        assert!(h.check_hermitian().is_ok());
        h[(0, 1)] = Complex64::new(2.0, 1e-3);
        assert!(matches!(h.check_hermitian(), Err(LinalgError::NotHermitian { .. })));
    }
}
