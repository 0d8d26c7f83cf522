//! Least squares against total least squares on a small noisy line fit.
//!
//! ```text
//! cargo run --example tls_fit
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tls_resonance::fitting::{self, FitProblem};
use tls_resonance::numerics::CMatrix;
use tls_resonance::numerics::CVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // y = 2 t with noise in both t and y
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = Normal::new(0.0, 0.05)?;
    let ts: Vec<f64> = (1..=8).map(|k| k as f64 * 0.25).collect();
    let rows: Vec<Vec<f64>> = ts.iter().map(|t| vec![t + noise.sample(&mut rng)]).collect();
    let ys: Vec<f64> = ts.iter().map(|t| 2.0 * t + noise.sample(&mut rng)).collect();

    let row_refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let p = FitProblem::new(CMatrix::from_real_rows(&row_refs)?, CVector::from_real(&ys)?)?;

    let ls = fitting::ls_solve(&p)?;
    let tls = fitting::tls_solve(&p)?;
    let closed = fitting::tls_closed_form(&p, tls.sigma_min)?;
    println!("slope ls          {:.6}", ls.x[0].re);
    println!("slope tls         {:.6}", tls.x[0].re);
    println!("slope tls-closed  {:.6}", closed[0].re);
    println!("sigma_min         {:.3e}", tls.sigma_min);
    println!("correction norm   {:.3e}", tls.correction_norm());
    println!("genericity margin {:.3e}", tls.genericity_margin);

    let bound = fitting::ls_tls_bound(&p)?;
    println!(
        "bound             {:.3e} <= {:.3e} ({})",
        bound.lhs,
        bound.rhs,
        bound.holds()
    );
    println!("identity residual {:.1e}", fitting::ls_tls_identity_residual(&p)?);
    println!("fit quality       {:.6}", fitting::fit_quality(&p, &tls.x)?);
    Ok(())
}
