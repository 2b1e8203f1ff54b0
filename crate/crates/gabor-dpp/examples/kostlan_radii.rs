//! For rotation-invariant pure ensembles the point radii are independent,
//! one per mode, each with an explicit one-dimensional law. That turns
//! radial questions into products: the probability of an empty disk is a
//! product of per-mode survival probabilities, and sampling radii needs no
//! rejection at all.
//!
//! Run with: cargo run --example kostlan_radii

use gabor_dpp::ensembles::IndexSet;
use gabor_dpp::sampling::{hole_probability, radial_law, radii_distribution_test, sample_kostlan};

fn main() {
    let level = 1usize;
    let indices = IndexSet::first(10);
    let law = radial_law(level, &indices).unwrap();

    let n_samples = 5000usize;
    let draws = sample_kostlan(&law, 1, n_samples).unwrap();
    let radii: Vec<Vec<f64>> = draws.iter().map(|d| d.radii.clone()).collect();
    println!("level {level}, 10 modes, {n_samples} draws\n");

    println!("hole probabilities (disk of radius R stays empty):");
    println!("{:>5} {:>14} {:>14}", "R", "analytic", "empirical");
    for &r in &[0.6, 0.8, 1.0, 1.2] {
        let analytic = hole_probability(level, &indices, r).unwrap();
        let empty = radii.iter().filter(|rs| rs.iter().all(|&s| s >= r)).count();
        println!(
            "{r:>5} {analytic:>14.6} {:>14.6}",
            empty as f64 / n_samples as f64
        );
    }

    // annulus goodness of fit: observed mean counts against the law
    let edges: Vec<f64> = (0..=8)
        .map(|i| (2.0 * i as f64 / std::f64::consts::PI).sqrt())
        .collect();
    let report = radii_distribution_test(&radii, &law, &edges).unwrap();
    println!("\nannulus counts per configuration:");
    println!("{:>16} {:>10} {:>10} {:>9}", "band", "expected", "observed", "");
    for b in &report.bands {
        println!(
            "[{:>6.3}, {:>6.3}) {:>10.4} {:>10.4} {:>9}",
            b.lo,
            b.hi,
            b.expected,
            b.observed,
            if b.pass { "ok" } else { "OFF" }
        );
    }
    println!(
        "\nchi-square {:.2} on {} bands: {}",
        report.chi_square,
        report.dof,
        if report.pass { "consistent" } else { "inconsistent" }
    );
}
