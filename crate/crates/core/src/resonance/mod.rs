//! Exact state-vector simulation of the two probe-qubit algorithms.
//!
//! Algorithm 1 sweeps the probe frequency with the register prepared in a
//! reference state `|psi>` and records how often the probe decays; at a
//! resonance the decay collapses the register onto the matching eigenstate
//! of `D`. Algorithm 2 sits on the ground-state resonance and repeatedly
//! evolves, measures and re-excites the probe, filtering the register
//! toward `v_{N+1}`.

mod sampling;
mod sweep;

pub use sampling::{sample_measurements, sampled_result, MeasurementMode};
pub use sweep::{
    parse_csv, sweep_algorithm1, sweep_algorithm2, write_csv, Peak, Resonance, SweepPlan, SweepResult, SweepSample,
    PEAK_THRESHOLD,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::hamiltonian::{HamiltonianModel, ModelError, ResonanceSystem};
use crate::numerics::{CVector, LinalgError, SpectralPropagator};

/// Conditioning on a probe outcome with lower probability than this fails.
pub const MIN_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResonanceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("probe decay probability {p:e} too small to condition on")]
    ZeroProbability { p: f64 },
    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),
    #[error("evolution time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),
    #[error("state dimension {actual} does not match the model ({expected})")]
    DimMismatch { expected: usize, actual: usize },
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, ResonanceError>;

/// Normalized amplitudes over `probe ⊗ register`, probe `|0>` block first.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amps: CVector,
}

impl QuantumState {
    /// Accepts amplitudes normalized to within `1e-10` and renormalizes them.
    pub fn new(amps: CVector) -> Result<Self> {
        if !amps.dim().is_multiple_of(2) {
            return Err(ResonanceError::DimMismatch {
                expected: amps.dim() + 1,
                actual: amps.dim(),
            });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(ResonanceError::NotNormalized(norm));
        }
        Ok(Self {
            amps: amps.scale(Complex64::new(1.0 / norm, 0.0)),
        })
    }

    fn with_probe(probe: usize, register: &CVector) -> Result<Self> {
        let r = register.dim();
        let mut amps = CVector::zeros(2 * r);
        for i in 0..r {
            amps[probe * r + i] = register[i];
        }
        Self::new(amps)
    }

    /// `|1> ⊗ register`.
    pub fn excited(register: &CVector) -> Result<Self> {
        Self::with_probe(1, register)
    }

    /// `|0> ⊗ register`.
    pub fn ground(register: &CVector) -> Result<Self> {
        Self::with_probe(0, register)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.dim()
    }

    pub fn register_dim(&self) -> usize {
        self.dim() / 2
    }

    /// Probability of finding the probe in `|0>`.
    pub fn probe_decay_probability(&self) -> f64 {
        let r = self.register_dim();
        let p: f64 = self.amps.as_slice()[..r].iter().map(|z| z.norm_sqr()).sum();
        p.clamp(0.0, 1.0)
    }

    /// Outcome probability and normalized register state after measuring
    /// the probe in `|probe>`.
    pub fn condition_on_probe(&self, probe: usize) -> Result<(f64, CVector)> {
        let r = self.register_dim();
        let part = CVector::new(self.amps.as_slice()[probe * r..(probe + 1) * r].to_vec())?;
        let p = part.norm_sqr();
        if p < MIN_PROBABILITY {
            return Err(ResonanceError::ZeroProbability { p });
        }
        Ok((p, part.scale(Complex64::new(1.0 / p.sqrt(), 0.0))))
    }
}

/// Free function form of [`QuantumState::probe_decay_probability`].
pub fn probe_decay_probability(state: &QuantumState) -> f64 {
    state.probe_decay_probability()
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(ResonanceError::InvalidTime(t));
    }
    Ok(())
}

fn evolve_with(prop: &SpectralPropagator, state: &QuantumState, t: f64) -> Result<QuantumState> {
    check_time(t)?;
    if state.dim() != prop.dim() {
        return Err(ResonanceError::DimMismatch {
            expected: prop.dim(),
            actual: state.dim(),
        });
    }
    Ok(QuantumState {
        amps: prop.apply(t, state.amplitudes()),
    })
}

/// `exp(-i H t) |state>`.
pub fn evolve(model: &HamiltonianModel, state: &QuantumState, t: f64) -> Result<QuantumState> {
    check_time(t)?;
    let prop = SpectralPropagator::new(&model.h)?;
    evolve_with(&prop, state, t)
}

/// Probe decay probability `sin^2(Q t / 2)` of an isolated resonant pair.
pub fn two_level_model(q: f64, t: f64) -> f64 {
    (q * t / 2.0).sin().powi(2)
}

/// `Q = 2 c |<v_{N+1}|F|psi>|`.
pub fn rabi_amplitude(system: &ResonanceSystem, c: f64, psi: &CVector) -> f64 {
    2.0 * c * system.transition_element(&system.ground_state(), psi).norm()
}

/// Register state after a successful decay, with its probability.
#[derive(Debug, Clone)]
pub struct Collapse {
    pub register: CVector,
    /// `|<v_{N+1}|register>|^2`.
    pub fidelity: f64,
    pub p_success: f64,
}

/// Evolves `|1>|psi>` under the algorithm 1 Hamiltonian and conditions on
/// the probe decaying to `|0>`.
pub fn collapse_algorithm1(
    system: &ResonanceSystem,
    omega: f64,
    epsilon0: f64,
    c: f64,
    t: f64,
    psi: &CVector,
) -> Result<Collapse> {
    let model = system.h1(omega, epsilon0, c, psi)?;
    let state = evolve(&model, &QuantumState::excited(psi)?, t)?;
    let (p_success, register) = state.condition_on_probe(0)?;
    Ok(Collapse {
        fidelity: system.ground_fidelity(&register),
        register,
        p_success,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Algorithm2Params {
    pub epsilon0: f64,
    pub coupling: f64,
    /// Number `j` of consecutive successful measurements.
    pub iterations: usize,
    pub omega: f64,
    /// Evolution time per step.
    pub tau: f64,
}

impl Algorithm2Params {
    /// Tuned to the ground-state resonance `omega = lambda_min - epsilon0`
    /// with `tau = pi / (2 c)`.
    pub fn resonant(system: &ResonanceSystem, epsilon0: f64, coupling: f64, iterations: usize) -> Self {
        Self {
            epsilon0,
            coupling,
            iterations,
            omega: system.lambda_min() - epsilon0,
            tau: PI / (2.0 * coupling),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Algorithm2Outcome {
    /// `|phi^(j)>`.
    pub state: CVector,
    /// Product of the per-step decay probabilities.
    pub success_prob: f64,
    pub per_step_probs: Vec<f64>,
    /// `|<v_{N+1}|phi^(i)>|^2` after each step.
    pub fidelities: Vec<f64>,
}

/// Tracks the conditional register state through `j` rounds of
/// evolve, measure `|0>`, re-excite.
pub fn algorithm2_iterate(
    system: &ResonanceSystem,
    phi0: &CVector,
    params: &Algorithm2Params,
) -> Result<Algorithm2Outcome> {
    let model = system.h2(params.omega, params.epsilon0, params.coupling)?;
    let prop = SpectralPropagator::new(&model.h)?;
    let mut phi = phi0.clone();
    let mut per_step_probs = Vec::with_capacity(params.iterations);
    let mut fidelities = Vec::with_capacity(params.iterations);
    for _ in 0..params.iterations {
        let state = evolve_with(&prop, &QuantumState::excited(&phi)?, params.tau)?;
        let (p, next) = state.condition_on_probe(0)?;
        per_step_probs.push(p);
        fidelities.push(system.ground_fidelity(&next));
        phi = next;
    }
    Ok(Algorithm2Outcome {
        state: phi,
        success_prob: per_step_probs.iter().product(),
        per_step_probs,
        fidelities,
    })
}
