//! Effect of measurement noise on the benchmark fit.

use tls_resonance::fitting;
use tls_resonance::prony::{self, PronyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = PronyParams::vanblaricum12();
    let clean = prony::build_lp_system(&prony::gen_signal(&params, 268), 12, 256)?;
    let truth = params.roots();

    println!(
        "{:>8} {:>12} {:>12} {:>14}",
        "sigma", "ls root err", "tls root err", "sigma_min"
    );
    for sigma in [0.0, 1e-8, 1e-6, 1e-4, 1e-2] {
        let p = prony::add_noise(&clean, sigma, 7)?;
        let ls = fitting::ls_solve(&p)?.x;
        let tls = fitting::tls_solve(&p)?;
        let err = |x| -> Result<f64, Box<dyn std::error::Error>> {
            let found = prony::recover_modes(x, params.t)?;
            Ok(truth
                .iter()
                .map(|z| found.iter().map(|r| (r.z - z).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max))
        };
        println!(
            "{sigma:>8.0e} {:>12.3e} {:>12.3e} {:>14.3e}",
            err(&ls)?,
            err(&tls.x)?,
            tls.sigma_min
        );
    }
    Ok(())
}
