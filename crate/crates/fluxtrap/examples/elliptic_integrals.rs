//! Complete elliptic integrals K(m) and E(m), the workhorses behind the
//! vortex vector potential: endpoint values and the Legendre relation.

use std::f64::consts::PI;

use fluxtrap::specfun::{elliptic_e, elliptic_k};

fn main() -> fluxtrap::Result<()> {
    println!("K(0) = {:.16} (pi/2 = {:.16})", elliptic_k(0.0)?, PI / 2.0);
    println!("E(0) = {:.16}", elliptic_e(0.0)?);
    println!("E(1) = {:.16}", elliptic_e(1.0)?);
    println!();
    println!("{:>4}  {:>18}  {:>18}  {:>12}", "m", "K(m)", "E(m)", "Legendre dev");
    for i in 1..=9 {
        let m = i as f64 / 10.0;
        let legendre = elliptic_k(m)? * elliptic_e(1.0 - m)?
            + elliptic_e(m)? * elliptic_k(1.0 - m)?
            - elliptic_k(m)? * elliptic_k(1.0 - m)?;
        println!(
            "{:>4.1}  {:>18.15}  {:>18.15}  {:>12.3e}",
            m,
            elliptic_k(m)?,
            elliptic_e(m)?,
            (legendre - PI / 2.0).abs()
        );
    }
    // K diverges logarithmically at m = 1; the argument check catches it
    assert!(elliptic_k(1.0).is_err());
    Ok(())
}
