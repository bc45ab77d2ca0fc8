//! A sign-changing field where certifying the threshold resonance takes more
//! than the leading Zeeman term.
//!
//! The binding integrals I_j = int B e^{-2phi} r^{2j} are positive for every
//! compact field with j < F (they equal a weighted Dirichlet energy), so the
//! certificates for the square-integrable modes always close. For the
//! resonance the quadratic form balances a positive cutoff-kinetic piece
//! against -(g-2)/2 I_N, and this annulus is tuned so that balance alone
//! fails: the trial function must also shift weight inward through a radial
//! bump with amplitude eps before the form goes negative.

use fluxtrap::zeromodes::{
    binding_integral, certify, guaranteed_count, tuned_linear_term_annulus, CertifyOutcome,
};

fn main() -> fluxtrap::Result<()> {
    let g = 3.0;
    let field = tuned_linear_term_annulus(g)?;
    let flux = field.total_flux()?;
    println!(
        "tuned annulus: F = {:.6}, N = {}, B changes sign: B(0.5) = {:.3}, B(1.7) = {:.3}",
        flux.f,
        flux.n,
        field.radial_b(0.5),
        field.radial_b(1.7)
    );

    let n = flux.n as usize;
    for j in 0..=n {
        println!("  I_{j} = {:+.6e} (positive despite the negative ring)",
            binding_integral(&field, j)?);
    }

    let gc = guaranteed_count(&field)?;
    println!("guaranteed count {}", gc.n_bound);
    for j in 0..gc.n_bound {
        match certify(&field, g, j)? {
            CertifyOutcome::Certified(c) => {
                println!(
                    "  j = {j}: form {:+.4e}, eps = {:+.4e}, breakdown: kinetic {:+.4e} \
                     + perturbation {:+.4e} + cross {:+.4e} + zeeman {:+.4e}",
                    c.form_value,
                    c.eps,
                    c.breakdown.cutoff_kinetic,
                    c.breakdown.perturbation_kinetic,
                    c.breakdown.cross,
                    c.breakdown.zeeman
                );
                if j == n {
                    // without the bump the resonance form would be the
                    // kinetic piece plus the Zeeman piece, and here that
                    // sum is positive by construction
                    assert!(c.eps != 0.0, "tuning should force a nonzero bump");
                    assert!(c.breakdown.cutoff_kinetic + c.breakdown.zeeman > 0.0);
                }
            }
            CertifyOutcome::Exhausted(f) => {
                println!("  j = {j}: exhausted, best {:+.4e}", f.best_value)
            }
        }
    }
    Ok(())
}
