//! Probe-qubit Hamiltonians on the `probe ⊗ register` space.
//!
//! Basis index is `probe * R + r` with the probe as the most significant
//! factor, so the probe ground state `|0>` occupies the first `R` entries.
//! `sigma_z |0> = |0>`, which puts `|0>` at energy `-omega/2`.
//!
//! Both models share the ground block `-omega/2 I + D_emb`, where `D_emb`
//! is `D = C^dagger C` in the top-left corner of an `R x R` register padded
//! with a constant energy well above the spectrum of `D`:
//!
//! ```text
//! H1 = [ -w/2 + D_emb      c F                  ]
//!      [ c F^dagger        w/2 + e0 |psi><psi|  ]
//!
//! H2 = [ -w/2 + D_emb      c I                  ]
//!      [ c I               (w/2 + e0) I         ]
//! ```
//!
//! `F` holds the pseudoinverse of `A` in its top-left `N x M` block. The
//! coupling of `H1` uses `F` and `F^dagger` on the two off-diagonal blocks so
//! that the operator stays Hermitian while `<0, v| H1 |1, psi> = c <v|F|psi>`.

use num_complex::Complex64;

use crate::fitting::{self, FitError, FitProblem, LsSolution, TlsSolution};
use crate::numerics::{hermitian_eig, CMatrix, CVector, LinalgError};

/// Largest coupling accepted by the builders.
pub const MAX_COUPLING: f64 = 0.1;
/// Tolerance on `||psi|| = 1`.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("coupling c = {c} outside [0, {MAX_COUPLING}]")]
    CouplingOutOfRange { c: f64 },
    #[error("non-finite parameter {name}")]
    NonFinite { name: &'static str },
}

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbeddingMode {
    /// `R = max(M, N + 1)`.
    #[default]
    Exact,
    /// `R` is the next power of two, as for an `n`-qubit register.
    Qubit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegisterEmbedding {
    /// `N + 1`, the dimension of `D`.
    pub logical_dim: usize,
    pub register_dim: usize,
    /// Diagonal energy of the register states outside the logical block.
    pub pad_value: f64,
    pub mode: EmbeddingMode,
}

impl RegisterEmbedding {
    pub fn new(p: &FitProblem, mode: EmbeddingMode) -> Result<Self> {
        let sigma_1 = crate::numerics::svd(&p.augmented().c)?.largest();
        Ok(Self::with_pad(p, mode, sigma_1 * sigma_1 + 2.0))
    }

    fn with_pad(p: &FitProblem, mode: EmbeddingMode, pad_value: f64) -> Self {
        let logical_dim = p.unknowns() + 1;
        let needed = p.rows().max(logical_dim);
        let register_dim = match mode {
            EmbeddingMode::Exact => needed,
            EmbeddingMode::Qubit => needed.next_power_of_two(),
        };
        Self {
            logical_dim,
            register_dim,
            pad_value,
            mode,
        }
    }

    /// Number of qubits needed to hold the register.
    pub fn qubits(&self) -> u32 {
        self.register_dim.next_power_of_two().trailing_zeros()
    }

    /// Zero-pads `v` to the register dimension.
    pub fn embed(&self, v: &CVector) -> Result<CVector> {
        if v.dim() > self.register_dim {
            return Err(ModelError::DimMismatch {
                expected: self.register_dim,
                actual: v.dim(),
            });
        }
        Ok(v.resized(self.register_dim))
    }

    /// `D` in the top-left block, `pad_value` on the remaining diagonal.
    pub fn embed_d(&self, d: &CMatrix) -> Result<CMatrix> {
        if d.rows() != self.logical_dim || !d.is_square() {
            return Err(ModelError::DimMismatch {
                expected: self.logical_dim,
                actual: d.rows(),
            });
        }
        let mut out = CMatrix::identity(self.register_dim).scale(Complex64::new(self.pad_value, 0.0));
        out.set_block(0, 0, d);
        Ok(out)
    }
}

/// Register state used as the reference `|psi>` or `|phi^(0)>`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ReferenceState {
    /// Normalized `b`.
    #[default]
    B,
    /// Normalized `x_LS`, zero-padded.
    Ls,
    /// Normalized `(x_LS; -1)`, the LS analogue of `y = (x; -1)`.
    LsAugmented,
    /// Caller-supplied register vector, normalized on use.
    Custom(CVector),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Algorithm1,
    Algorithm2,
}

#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    pub h: CMatrix,
    pub omega: f64,
    pub epsilon0: f64,
    pub coupling: f64,
    pub kind: ModelKind,
    pub embedding: RegisterEmbedding,
    /// Register part of the initial state for algorithm 1; `None` for
    /// algorithm 2, whose reference is supplied at simulation time.
    pub reference_state: Option<CVector>,
}

impl HamiltonianModel {
    /// Dimension of the full `probe ⊗ register` space.
    pub fn dim(&self) -> usize {
        self.h.rows()
    }
}

/// Everything about a fitting problem that the Hamiltonians need, computed once.
#[derive(Debug, Clone)]
pub struct ResonanceSystem {
    problem: FitProblem,
    embedding: RegisterEmbedding,
    d: CMatrix,
    d_emb: CMatrix,
    f: CMatrix,
    tls: TlsSolution,
    ls: LsSolution,
    d_spectrum: Vec<f64>,
}

impl ResonanceSystem {
    pub fn new(problem: FitProblem, mode: EmbeddingMode) -> Result<Self> {
        let tls = fitting::tls_solve(&problem)?;
        let ls = fitting::ls_solve(&problem)?;
        let sigma_1 = tls.singulars_c[0];
        let embedding = RegisterEmbedding::with_pad(&problem, mode, sigma_1 * sigma_1 + 2.0);
        let d = problem.augmented().d.symmetrized();
        let d_emb = embedding.embed_d(&d)?;
        let f = build_f(&problem, &embedding)?;
        let d_spectrum = hermitian_eig(&d)?.eigenvalues;
        Ok(Self {
            problem,
            embedding,
            d,
            d_emb,
            f,
            tls,
            ls,
            d_spectrum,
        })
    }

    pub fn problem(&self) -> &FitProblem {
        &self.problem
    }

    pub fn embedding(&self) -> &RegisterEmbedding {
        &self.embedding
    }

    pub fn register_dim(&self) -> usize {
        self.embedding.register_dim
    }

    /// `D = C^dagger C`.
    pub fn d(&self) -> &CMatrix {
        &self.d
    }

    pub fn d_embedded(&self) -> &CMatrix {
        &self.d_emb
    }

    pub fn f(&self) -> &CMatrix {
        &self.f
    }

    pub fn tls(&self) -> &TlsSolution {
        &self.tls
    }

    pub fn ls(&self) -> &LsSolution {
        &self.ls
    }

    /// Eigenvalues of `D`, ascending.
    pub fn d_spectrum(&self) -> &[f64] {
        &self.d_spectrum
    }

    /// `sigma_{N+1}^2`, the ground energy of `D`.
    pub fn lambda_min(&self) -> f64 {
        self.d_spectrum[0]
    }

    /// The TLS ground state `v_{N+1}` embedded in the register.
    pub fn ground_state(&self) -> CVector {
        self.tls.v_min.resized(self.register_dim())
    }

    /// Fidelity `|<v_{N+1}|phi>|^2` of a register state.
    pub fn ground_fidelity(&self, phi: &CVector) -> f64 {
        self.ground_state().dot(phi).norm_sqr()
    }

    /// The requested reference state, normalized and embedded.
    pub fn reference(&self, which: &ReferenceState) -> Result<CVector> {
        let raw = match which {
            ReferenceState::B => self.problem.b().clone(),
            ReferenceState::Ls => self.ls.x.clone(),
            ReferenceState::LsAugmented => {
                let mut y = self.ls.x.resized(self.embedding.logical_dim);
                y[self.embedding.logical_dim - 1] = Complex64::new(-1.0, 0.0);
                y
            }
            ReferenceState::Custom(v) => v.clone(),
        };
        let unit = raw.normalized().ok_or(ModelError::NotNormalized { norm: 0.0 })?;
        self.embedding.embed(&unit)
    }

    /// `<v|F|psi>` for register vectors.
    pub fn transition_element(&self, v: &CVector, psi: &CVector) -> Complex64 {
        v.dot(&self.f.mul_vec(psi))
    }

    fn ground_block(&self, omega: f64) -> CMatrix {
        let mut g = self.d_emb.clone();
        for i in 0..self.register_dim() {
            g[(i, i)] -= Complex64::new(omega / 2.0, 0.0);
        }
        g
    }

    pub fn h1(&self, omega: f64, epsilon0: f64, c: f64, psi: &CVector) -> Result<HamiltonianModel> {
        check_params(omega, epsilon0, c)?;
        let r = self.register_dim();
        check_state(psi, r)?;
        let mut excited = CMatrix::from_fn(r, r, |i, j| epsilon0 * psi[i] * psi[j].conj());
        for i in 0..r {
            excited[(i, i)] += Complex64::new(omega / 2.0, 0.0);
        }
        let coupling = self.f.scale(Complex64::new(c, 0.0));
        let mut h = CMatrix::zeros(2 * r, 2 * r);
        h.set_block(0, 0, &self.ground_block(omega));
        h.set_block(r, r, &excited.symmetrized());
        h.set_block(0, r, &coupling);
        h.set_block(r, 0, &coupling.adjoint());
        Ok(HamiltonianModel {
            h,
            omega,
            epsilon0,
            coupling: c,
            kind: ModelKind::Algorithm1,
            embedding: self.embedding,
            reference_state: Some(psi.clone()),
        })
    }

    pub fn h2(&self, omega: f64, epsilon0: f64, c: f64) -> Result<HamiltonianModel> {
        check_params(omega, epsilon0, c)?;
        let r = self.register_dim();
        let excited = CMatrix::identity(r).scale(Complex64::new(omega / 2.0 + epsilon0, 0.0));
        let coupling = CMatrix::identity(r).scale(Complex64::new(c, 0.0));
        let mut h = CMatrix::zeros(2 * r, 2 * r);
        h.set_block(0, 0, &self.ground_block(omega));
        h.set_block(r, r, &excited);
        h.set_block(0, r, &coupling);
        h.set_block(r, 0, &coupling);
        Ok(HamiltonianModel {
            h,
            omega,
            epsilon0,
            coupling: c,
            kind: ModelKind::Algorithm2,
            embedding: self.embedding,
            reference_state: None,
        })
    }
}

fn check_params(omega: f64, epsilon0: f64, c: f64) -> Result<()> {
    if !omega.is_finite() {
        return Err(ModelError::NonFinite { name: "omega" });
    }
    if !epsilon0.is_finite() {
        return Err(ModelError::NonFinite { name: "epsilon0" });
    }
    if !c.is_finite() || !(0.0..=MAX_COUPLING).contains(&c) {
        return Err(ModelError::CouplingOutOfRange { c });
    }
    Ok(())
}

fn check_state(psi: &CVector, dim: usize) -> Result<()> {
    if psi.dim() != dim {
        return Err(ModelError::DimMismatch {
            expected: dim,
            actual: psi.dim(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(ModelError::NotNormalized { norm });
    }
    Ok(())
}

/// `R x R` coupling operator with the pseudoinverse of `A` in its top-left
/// `N x M` block.
pub fn build_f(p: &FitProblem, emb: &RegisterEmbedding) -> Result<CMatrix> {
    let needed = p.rows().max(p.unknowns() + 1);
    if emb.register_dim < needed {
        return Err(ModelError::DimMismatch {
            expected: needed,
            actual: emb.register_dim,
        });
    }
    let pinv = fitting::pseudoinverse(p.a())?;
    let mut f = CMatrix::zeros(emb.register_dim, emb.register_dim);
    f.set_block(0, 0, &pinv);
    Ok(f)
}

/// Algorithm 1 Hamiltonian for a one-off build. Sweeps should reuse a
/// [`ResonanceSystem`] instead.
pub fn build_h1(
    p: &FitProblem,
    omega: f64,
    epsilon0: f64,
    c: f64,
    mode: EmbeddingMode,
    psi: &CVector,
) -> Result<HamiltonianModel> {
    ResonanceSystem::new(p.clone(), mode)?.h1(omega, epsilon0, c, psi)
}

/// Algorithm 2 Hamiltonian for a one-off build.
pub fn build_h2(p: &FitProblem, omega: f64, epsilon0: f64, c: f64, mode: EmbeddingMode) -> Result<HamiltonianModel> {
    ResonanceSystem::new(p.clone(), mode)?.h2(omega, epsilon0, c)
}

/// Probe frequency at which the excited reference level `omega/2 + epsilon0`
/// crosses the register level `lambda - omega/2`.
pub fn resonance_omega(lambda_target: f64, epsilon0: f64) -> f64 {
    lambda_target - epsilon0
}
