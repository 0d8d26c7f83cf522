//! Probe-frequency sweep over the benchmark, then collapse at the peak.
//!
//! ```text
//! cargo run --release --example algorithm1_sweep [points]
//! ```

use tls_resonance::hamiltonian::{EmbeddingMode, ReferenceState, ResonanceSystem};
use tls_resonance::prony::{self, PronyParams};
use tls_resonance::resonance::{self, collapse_algorithm1, SweepPlan};

const EPSILON0: f64 = -1.0;
const COUPLING: f64 = 0.0005;
const TIME: f64 = 30000.0;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(60);
    let signal = prony::gen_signal(&PronyParams::vanblaricum12(), 267);
    let sys = ResonanceSystem::new(prony::build_lp_system(&signal, 11, 256)?, EmbeddingMode::Exact)?;
    let l1 = sys.lambda_min();
    let psi = sys.reference(&ReferenceState::B)?;

    let plan = SweepPlan::for_eigenvalues(l1 - 0.003, l1 + 0.003, points, EPSILON0, COUPLING, TIME)?;
    let sweep = resonance::sweep_algorithm1(&sys, &plan, &psi)?;
    for s in &sweep.samples {
        let bar = "#".repeat((s.p_decay * 50.0).round() as usize);
        println!("{:.6} {:.4} {bar}", s.omega, s.p_decay);
    }
    let dom = sweep.dominant().ok_or("no resonance above threshold")?;
    println!("\nlambda_min     {l1:.6e}");
    println!("sweep estimate {:.6e} (grid step {:.1e})", dom.lambda, plan.delta());

    let c = collapse_algorithm1(&sys, dom.omega, EPSILON0, COUPLING, TIME, &psi)?;
    println!(
        "collapse at the estimate: fidelity {:.12}, success {:.4}",
        c.fidelity, c.p_success
    );
    let c = collapse_algorithm1(&sys, l1 - EPSILON0, EPSILON0, COUPLING, TIME, &psi)?;
    println!(
        "collapse at lambda_min:   fidelity {:.12}, success {:.4}",
        c.fidelity, c.p_success
    );
    Ok(())
}
