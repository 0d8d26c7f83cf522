//! Twelve-mode damped exponential benchmark: exact recovery with twelve
//! prediction coefficients, and the resulting fit with eleven.

use tls_resonance::fitting;
use tls_resonance::hamiltonian::{EmbeddingMode, ResonanceSystem};
use tls_resonance::prony::{self, PronyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = PronyParams::vanblaricum12();
    let signal = prony::gen_signal(&params, 268);
    println!("s_0 = {}, max |Im s_k| = {:.1e}", signal.samples[0], signal.max_imag());

    let exact = prony::build_lp_system(&signal, 12, 256)?;
    let x = fitting::ls_solve(&exact)?.x;
    println!("\nN = 12, recovered modes:");
    for m in prony::recover_modes(&x, params.t)? {
        println!("  lambda = {:>9.5} {:+9.5}i", m.lambda.re, m.lambda.im);
    }

    let p = prony::build_lp_system(&signal, 11, 256)?;
    let tls = fitting::tls_solve(&p)?;
    let sys = ResonanceSystem::new(p, EmbeddingMode::Exact)?;
    let spec = sys.d_spectrum();
    println!("\nN = 11: sigma_min^2 = {:.6e}", tls.sigma_min.powi(2));
    println!(
        "lowest eigenvalues of D: {:.6e} {:.6e} (ratio {:.1})",
        spec[0],
        spec[1],
        spec[1] / spec[0]
    );
    println!(
        "register dimension {} ({} qubits)",
        sys.register_dim(),
        sys.embedding().qubits()
    );
    Ok(())
}
