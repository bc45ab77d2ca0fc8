//! Where does a channel first bind? Bisect the current strength lambda per
//! spin-down channel at g = 3.
//!
//! The s channel binds for every lambda > 0 (the weak-coupling condition
//! holds at g > 2), so its bisection reports the count already nonzero at
//! the lower bracket end. ell = -1 has a genuine threshold. ell = +1 rides
//! the unfavorable sign of the field coupling and stays empty across the
//! whole bracket; the two senses of circulation are not equivalent.

use fluxtrap::fields::CurrentProfile;
use fluxtrap::radial_solver::{critical_strength, Discretization, Spin};

fn main() {
    let current = CurrentProfile::standard();
    let disc = Discretization::new(60.0, 1024);
    for ell in [0, -1, 1] {
        match critical_strength(ell, Spin::Down, 3.0, &current, (0.2, 40.0), &disc) {
            Ok(c) => println!(
                "ell = {ell:>2}: lambda_c = {:.4}, negative count {} -> {}",
                c.lambda_c, c.count_below, c.count_above
            ),
            Err(e) => println!("ell = {ell:>2}: {e}"),
        }
    }
}
