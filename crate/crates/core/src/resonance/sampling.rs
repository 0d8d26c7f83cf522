//! Finite-shot measurement of the decay probabilities.
//!
//! Draws come from `ChaCha8Rng::seed_from_u64(seed)`, one Bernoulli trial
//! per shot, frequencies in grid order. The generator is portable, so a
//! seed yields the same counts on every platform.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sweep::{SweepResult, SweepSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasurementMode {
    /// Exact probabilities.
    #[default]
    Deterministic,
    Sampled {
        shots: u64,
        seed: u64,
    },
}

/// Number of decays observed in `shots` trials at each probability.
pub fn sample_measurements(probabilities: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    probabilities
        .iter()
        .map(|&p| {
            let trial = Bernoulli::new(p.clamp(0.0, 1.0)).expect("probability clamped to [0, 1]");
            (0..shots).filter(|_| trial.sample(&mut rng)).count() as u64
        })
        .collect()
}

/// Replaces every exact probability by its sampled frequency
/// `count / shots` and recomputes peaks.
pub fn sampled_result(exact: &SweepResult, shots: u64, seed: u64) -> SweepResult {
    let probs: Vec<f64> = exact.samples.iter().map(|s| s.p_decay).collect();
    let counts = sample_measurements(&probs, shots, seed);
    let samples = exact
        .samples
        .iter()
        .zip(counts)
        .map(|(s, k)| SweepSample {
            omega: s.omega,
            p_decay: k as f64 / shots as f64,
        })
        .collect();
    SweepResult::from_samples(samples, exact.epsilon0, exact.delta)
}
