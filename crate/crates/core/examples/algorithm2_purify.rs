//! Repeated resonant steps starting from the least-squares solution.

use tls_resonance::hamiltonian::{EmbeddingMode, ReferenceState, ResonanceSystem};
use tls_resonance::prony::{self, PronyParams};
use tls_resonance::resonance::{algorithm2_iterate, Algorithm2Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let signal = prony::gen_signal(&PronyParams::vanblaricum12(), 267);
    let sys = ResonanceSystem::new(prony::build_lp_system(&signal, 11, 256)?, EmbeddingMode::Exact)?;
    let params = Algorithm2Params::resonant(&sys, -1.0, 1e-4, 3);
    println!("tau = {:.2}", params.tau);

    for (name, which) in [
        ("x_LS zero-padded", ReferenceState::Ls),
        ("(x_LS, -1)", ReferenceState::LsAugmented),
    ] {
        let phi0 = sys.reference(&which)?;
        let out = algorithm2_iterate(&sys, &phi0, &params)?;
        println!(
            "\nstart {name}: overlap with ground state {:.6}",
            sys.ground_fidelity(&phi0)
        );
        for (j, (p, f)) in out.per_step_probs.iter().zip(&out.fidelities).enumerate() {
            println!("  step {}: p = {p:.6}  1 - fidelity = {:.2e}", j + 1, 1.0 - f);
        }
        println!("  success {:.6}", out.success_prob);
    }
    Ok(())
}
