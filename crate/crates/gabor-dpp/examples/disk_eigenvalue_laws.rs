//! Closed-form structure of disk spectra.
//!
//! At level 0 the eigenvalues are regularized incomplete gamma values
//! P(j+1, pi R^2). At level 1 the first two eigenvalue curves cross when
//! the disk area passes 1, so which mode dominates depends on the radius.
//!
//! Run with: cargo run --example disk_eigenvalue_laws

use gabor_dpp::specfun::regularized_lower_gamma;
use gabor_dpp::toeplitz::mu_radial;
use std::f64::consts::PI;

fn main() {
    let x0 = 10.0;
    let radius = (x0 / PI).sqrt();
    println!("level 0, pi R^2 = {x0}:");
    println!("{:>3} {:>20} {:>20} {:>10}", "j", "mu_j", "P(j+1, x0)", "diff");
    for j in 0..=8usize {
        let mu = mu_radial(0, j, radius).unwrap();
        let p = regularized_lower_gamma(j, x0).unwrap();
        println!("{j:>3} {mu:>20.15} {p:>20.15} {:>10.1e}", mu - p);
    }

    // level 1: mu_1 > mu_0 on small disks, order flips at R* = 1/sqrt(pi)
    println!("\nlevel 1, first two eigenvalue curves:");
    for &r in &[0.35, 0.45, 0.5641895835477563, 0.7, 0.9] {
        let m0 = mu_radial(1, 0, r).unwrap();
        let m1 = mu_radial(1, 1, r).unwrap();
        let rel = match m1.partial_cmp(&m0).unwrap() {
            std::cmp::Ordering::Greater => "mu_1 > mu_0",
            std::cmp::Ordering::Less => "mu_1 < mu_0",
            std::cmp::Ordering::Equal => "mu_1 = mu_0",
        };
        println!("R = {r:<20} mu_0 = {m0:.12}  mu_1 = {m1:.12}  {rel}");
    }

    let f = |r: f64| mu_radial(1, 1, r).unwrap() - mu_radial(1, 0, r).unwrap();
    let (mut lo, mut hi) = (0.3f64, 0.9f64);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    println!(
        "\ncrossing radius by bisection: {:.12}  (1/sqrt(pi) = {:.12})",
        0.5 * (lo + hi),
        1.0 / PI.sqrt()
    );
}
