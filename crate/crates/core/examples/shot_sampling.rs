//! Finite-shot estimate of a sweep, next to the exact probabilities.

use tls_resonance::hamiltonian::{EmbeddingMode, ReferenceState, ResonanceSystem};
use tls_resonance::prony::{self, PronyParams};
use tls_resonance::resonance::{self, sampled_result, SweepPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let signal = prony::gen_signal(&PronyParams::vanblaricum12(), 267);
    let sys = ResonanceSystem::new(prony::build_lp_system(&signal, 11, 256)?, EmbeddingMode::Exact)?;
    let l1 = sys.lambda_min();
    let psi = sys.reference(&ReferenceState::B)?;
    let plan = SweepPlan::for_eigenvalues(l1 - 0.002, l1 + 0.002, 16, -1.0, 0.0005, 30000.0)?;
    let exact = resonance::sweep_algorithm1(&sys, &plan, &psi)?;

    let shots = 200;
    let sampled = sampled_result(&exact, shots, 42);
    println!("{:>10} {:>8} {:>8}", "omega", "exact", "sampled");
    for (e, s) in exact.samples.iter().zip(&sampled.samples) {
        println!("{:>10.6} {:>8.4} {:>8.4}", e.omega, e.p_decay, s.p_decay);
    }
    let est = |r: &resonance::SweepResult| r.dominant().map(|d| d.lambda).unwrap_or(f64::NAN);
    println!(
        "\nestimate exact {:.6e}, sampled ({shots} shots) {:.6e}, lambda_min {l1:.6e}",
        est(&exact),
        est(&sampled)
    );
    Ok(())
}
