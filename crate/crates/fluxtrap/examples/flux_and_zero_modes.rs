//! Flux decomposition F = N + eps and the explicit zero modes of the g = 2
//! operator for a uniform disk field.
//!
//! With F = 2.5 there are N = 2 square-integrable modes (j = 0, 1) decaying
//! like r^{j-F}, and j = 2 is the threshold resonance with eps = 0.5.

use fluxtrap::fields::FieldProfile;
use fluxtrap::planar_solver::{zero_mode_residual, PlanarGrid};
use fluxtrap::zeromodes::{binding_integral, zero_mode};

fn main() {
    let field = FieldProfile::uniform_disk(5.0, 1.0);
    let flux = field.total_flux().unwrap();
    println!(
        "disk b0 = 5, radius = 1: F = {:.4}, N = {}, eps = {:.4}",
        flux.f, flux.n, flux.eps
    );

    for j in 0..=(flux.n as usize) {
        // far-field decay measured between 20 and 40 support radii
        let m1 = zero_mode(&field, j, [20.0, 0.0]).unwrap().norm();
        let m2 = zero_mode(&field, j, [40.0, 0.0]).unwrap().norm();
        let exponent = (m2 / m1).ln() / 2f64.ln();
        let i_j = binding_integral(&field, j).unwrap();
        // the sampled mode is annihilated by the discrete operator up to
        // stencil error; the B jump at the disk edge keeps the decay in h
        // below first order, but it must shrink under refinement
        let r64 = zero_mode_residual(&field, j, PlanarGrid::new(3.0, 64).unwrap()).unwrap();
        let r128 = zero_mode_residual(&field, j, PlanarGrid::new(3.0, 128).unwrap()).unwrap();
        assert!(r128 < r64);
        println!(
            "j = {j}: |chi| ~ r^{exponent:.4} (exact {:.4}), I_{j} = {i_j:.6}, \
             stencil residual {r64:.2e} -> {r128:.2e} under h -> h/2",
            j as f64 - flux.f
        );
    }

    // the resonance j = N is bounded but not square integrable: its decay
    // exponent -eps sits in (-1, 0]
    let j = flux.n as usize;
    let decay = j as f64 - flux.f;
    assert!((-1.0..=0.0).contains(&decay));
    println!("mode j = {j} is the zero-energy resonance (decay r^{decay:.1})");
}
