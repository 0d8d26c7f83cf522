//! Time evolution of a three-level Hermitian Hamiltonian.

use num_complex::Complex64;
use tls_resonance::numerics::{expm_unitary, hermitian_eig, CMatrix, CVector, SpectralPropagator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = |re, im| Complex64::new(re, im);
    let h = CMatrix::new(
        3,
        3,
        vec![
            c(1.0, 0.0),
            c(0.2, -0.1),
            c(0.0, 0.0),
            c(0.2, 0.1),
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.0, 0.0),
            c(0.3, 0.0),
            c(-0.4, 0.0),
        ],
    )?;

    let eig = hermitian_eig(&h)?;
    println!("eigenvalues {:?}", eig.eigenvalues);
    println!("max residual {:.1e}", eig.max_residual(&h));

    let prop = SpectralPropagator::new(&h)?;
    let psi0 = CVector::basis(3, 0);
    for t in [0.0, 1.0, 2.5, 10.0] {
        let psi = prop.apply(t, &psi0);
        let pops: Vec<String> = psi.iter().map(|a| format!("{:.4}", a.norm_sqr())).collect();
        println!("t={t:<5} populations [{}] norm {:.15}", pops.join(", "), psi.norm());
    }

    let u = expm_unitary(&h, 2.5)?;
    println!("unitarity defect of exp(-iHt) at t=2.5: {:.1e}", u.unitarity_defect());
    Ok(())
}
