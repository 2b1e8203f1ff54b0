//! Assemble the localization operator of a Gaussian window on a disk and
//! look at its eigenvalue profile: a plateau of near-1 values of length
//! about the disk area, then a fast drop.
//!
//! Run with: cargo run --example spectrum_plateau

use gabor_dpp::domains::Domain;
use gabor_dpp::phasespace::WindowSpec;
use gabor_dpp::toeplitz::{assemble, eigendecompose, weyl_count, AssemblyOptions};
use std::f64::consts::PI;

fn main() {
    let area = 20.0;
    let domain = Domain::disk((area / PI).sqrt()).unwrap();
    let window = WindowSpec::hermite(0);
    let m = 2 * domain.n_omega() + 48;

    let t = assemble(&window, &domain, m, &AssemblyOptions::default()).unwrap();
    println!("domain {}  basis {m}", t.domain_descriptor);
    println!("trace {:.12}  (domain area {area})", t.trace);
    println!("mass beyond the basis: {:.3e}", t.tail_mass);

    let spectrum = eigendecompose(&t).unwrap();
    let plateau = weyl_count(&spectrum.eigenvalues, 0.5).unwrap();
    println!(
        "eigenvalues above 1/2: {plateau}  (expected count {})\n",
        domain.n_omega()
    );

    // text staircase of the first 32 eigenvalues
    for (j, l) in spectrum.eigenvalues.iter().take(32).enumerate() {
        let bar = "#".repeat((l * 56.0).round() as usize);
        println!("{j:3}  {l:10.7}  {bar}");
    }
}
