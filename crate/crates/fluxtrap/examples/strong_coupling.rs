//! Strong current: near the origin A(r) ~ lambda mu r looks like a uniform
//! field of strength 2 lambda mu, so the rescaled ground state E0/lambda
//! approaches the anomalous oscillator level nu = mu(2 - g) as lambda grows.

use fluxtrap::fields::{current_moments, CurrentProfile};
use fluxtrap::radial_solver::{
    rescaled_ground_state, strong_coupling_discretization, strong_coupling_limit,
};

fn main() -> fluxtrap::Result<()> {
    let current = CurrentProfile::standard();
    let mu = current_moments(&current)?.mu;
    let g = 3.0;
    let nu = strong_coupling_limit(mu, g, 0, 0)?;
    println!("mu = {mu:.6}, limit nu = mu(2 - g) = {nu:.6}");
    println!("{:>8}  {:>12}  {:>10}", "lambda", "E0/lambda", "abs err");
    for lambda in [250.0, 1000.0, 4000.0] {
        let disc = strong_coupling_discretization(lambda, mu);
        match rescaled_ground_state(lambda, g, 0, &current, &disc)? {
            Some(v) => println!("{lambda:>8}  {v:>12.6}  {:>10.2e}", (v - nu).abs()),
            None => println!("{lambda:>8}  (no negative eigenvalue)"),
        }
    }

    // channels with 2(|l|+l) + 2 > g have nu > 0 and lose their bound
    // state in the limit; for g = 3 that is every l > 0
    for ell in [-1, 0, 1] {
        println!(
            "ell = {ell:>2}: nu_0 = {:+.4}",
            strong_coupling_limit(mu, g, 0, ell)?
        );
    }
    Ok(())
}
