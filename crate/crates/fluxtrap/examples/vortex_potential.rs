//! Vector potential of an electric current vortex J(r) = r^2 e^{-r},
//! computed from the elliptic-integral kernel: small-r slope, far-field
//! dipole tail, and the logarithmic pairing identity.

use std::f64::consts::PI;

use fluxtrap::fields::{
    current_moments, gauge_energy, pair_interaction, CurrentProfile, FieldProfile,
};

fn main() -> fluxtrap::Result<()> {
    let current = CurrentProfile::standard();
    let m = current_moments(&current)?;
    println!("moments: mu = {:.8}, dipole = {:.8}, J/r^2 -> {:.3} at 0", m.mu, m.dipole, m.a);

    let field = FieldProfile::vortex(current)?;
    println!("\n{:>8}  {:>14}  {:>14}  {:>14}", "r", "a_phi", "mu*r (small r)", "dip/(pi r^2)");
    for r in [0.01, 0.05, 0.2, 1.0, 5.0, 20.0, 60.0] {
        let a = field.radial_vector_potential(r)?;
        println!(
            "{:>8.2}  {:>14.6e}  {:>14.6e}  {:>14.6e}",
            r,
            a,
            m.mu * r,
            m.dipole / (PI * r * r)
        );
    }

    // ints B1(x) B1(y) ln|x-y| dx dy = -2 pi ints A1^2, valid because the
    // vortex field carries zero net flux
    let lhs = pair_interaction(&field)?;
    let rhs = -2.0 * PI * gauge_energy(&field)?;
    println!("\npairing identity: {lhs:.10e} vs {rhs:.10e}");
    println!("relative difference {:.3e}", (lhs - rhs).abs() / rhs.abs());
    Ok(())
}
