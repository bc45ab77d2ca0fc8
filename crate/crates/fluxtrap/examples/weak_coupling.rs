//! Weak current: the second-order binding condition and the exponentially
//! shallow ground state.
//!
//! For a current vortex the net flux vanishes, so first-order perturbation
//! theory is silent and binding is decided at second order by
//! int A^2 - (g^2 / 8 pi) * ints B B ln|x-y|; the pairing identity turns the
//! double integral into -2 pi int A^2, so the condition flips exactly at
//! g = 2. Above it, ln|E(lambda)| ~ -[ (lambda^2/8)(g^2-4) int A^2 r dr ]^{-1}.
//!
//! Runtime: about a minute; each lambda needs the shallow state resolved on
//! a large adaptive domain.

use std::f64::consts::PI;

use fluxtrap::fields::{gauge_energy, CurrentProfile, FieldProfile};
use fluxtrap::radial_solver::{
    negative_spectrum, weak_coupling_condition, weak_coupling_energy, Discretization,
    RadialProblem, Spin,
};

fn main() -> fluxtrap::Result<()> {
    let field = FieldProfile::vortex(CurrentProfile::standard())?;

    for g in [1.8, 1.95, 2.0, 2.05, 2.2] {
        let (lhs, binds) = weak_coupling_condition(&field, g)?;
        println!(
            "g = {g:<4}: condition value {lhs:+.4e} -> {}",
            if binds { "binds" } else { "no binding at weak coupling" }
        );
    }

    let g = 4.0;
    let i_a = gauge_energy(&field)? / (2.0 * PI);
    println!("\ng = {g}: int A^2 r dr = {i_a:.4}, predicted ln|E| slope in 1/lambda^2 = {:.4e}",
        -1.0 / ((g * g - 4.0) / 8.0 * i_a));

    let disc = Discretization::new(100.0, 4096);
    println!("{:>7}  {:>14}  {:>14}", "lambda", "solver E", "predicted E");
    for lambda in [0.035, 0.045, 0.055] {
        let predicted = weak_coupling_energy(lambda, g, &field)?;
        let p = RadialProblem::from_field(0, Spin::Down, g, lambda, field.clone())?;
        let spec = negative_spectrum(&p, &disc)?;
        match spec.extrapolated.first() {
            Some(e) => println!("{lambda:>7}  {e:>14.6e}  {predicted:>14.6e}"),
            None => println!("{lambda:>7}  {:>14}  {predicted:>14.6e}", "below floor"),
        }
    }
    println!("(the prefactor of the law is not universal; only the exponent slope is)");
    Ok(())
}
