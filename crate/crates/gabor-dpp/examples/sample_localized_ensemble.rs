//! Sample the determinantal ensemble attached to a localization operator:
//! assemble the operator for a Gaussian window on a disk, keep the leading
//! eigenfunctions, and draw a configuration from the resulting projection
//! kernel. The points concentrate on the disk.
//!
//! Run with: cargo run --example sample_localized_ensemble

use gabor_dpp::domains::Domain;
use gabor_dpp::ensembles::finite_wh_kernel;
use gabor_dpp::phasespace::WindowSpec;
use gabor_dpp::sampling::sample_dpp;
use gabor_dpp::toeplitz::AssemblyOptions;
use std::f64::consts::PI;

fn main() {
    let area = 8.0;
    let radius = (area / PI).sqrt();
    let domain = Domain::disk(radius).unwrap();
    let window = WindowSpec::hermite(0);
    let m = 2 * domain.n_omega() + 48;

    let kernel = finite_wh_kernel(&window, &domain, m, &AssemblyOptions::default()).unwrap();
    println!("kernel {}", kernel.descriptor());

    let batch = sample_dpp(&kernel, 7, 3).unwrap();
    println!(
        "bounding radius {:.3}  acceptance {:.4}\n",
        batch.bounding_radius,
        batch.acceptance_rate()
    );

    for config in &batch.configurations {
        let inside = config
            .points
            .iter()
            .filter(|p| p.x * p.x + p.xi * p.xi <= radius * radius)
            .count();
        let radii: Vec<String> = config
            .radii()
            .iter()
            .map(|r| format!("{r:.2}"))
            .collect();
        println!(
            "configuration {}: {} of {} points inside the disk (R = {radius:.3})",
            config.sample_id,
            inside,
            config.points.len()
        );
        println!("  radii: {}", radii.join(" "));
    }
}
