//! Total least squares fitting and exact state-vector simulation of a
//! probe-qubit eigensolver that prepares the TLS solution as the ground
//! state of `D = C^dagger C`.
//!
//! Runnable examples live in `examples/`:
//!
//! ```text
//! cargo run --release --example tls_fit
//! cargo run --release --example spectral_propagator
//! cargo run --release --example prony_benchmark
//! cargo run --release --example algorithm1_sweep
//! cargo run --release --example algorithm2_purify
//! cargo run --release --example noisy_prony
//! cargo run --release --example shot_sampling
//! ```

pub mod cli;
pub mod fitting;
pub mod hamiltonian;
pub mod numerics;
pub mod prony;
pub mod resonance;
