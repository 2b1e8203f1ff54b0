//! Dilate a disk and count eigenvalues above 1/2: the count tracks the
//! area with an error on the scale of the perimeter, so the normalized
//! error |count - area| / perimeter stays flat while the raw excess grows.
//!
//! Run with: cargo run --example weyl_count_sweep

use gabor_dpp::toeplitz::{mu_radial, weyl_count};
use std::f64::consts::PI;

fn main() {
    let level = 1usize;
    println!("window level {level}, threshold 1/2\n");
    println!(
        "{:>6} {:>6} {:>8} {:>11} {:>12}",
        "area", "count", "excess", "perimeter", "normalized"
    );
    for &area in &[25.0f64, 50.0, 100.0] {
        let radius = (area / PI).sqrt();
        // scan well past the bulk edge; the transition has width O(sqrt(area))
        let j_max = (area + 12.0 * area.sqrt() + 60.0) as usize;
        let mus: Vec<f64> = (0..j_max)
            .map(|j| mu_radial(level, j, radius).unwrap())
            .collect();
        let count = weyl_count(&mus, 0.5).unwrap();
        let excess = count as f64 - area;
        let perimeter = 2.0 * PI * radius;
        println!(
            "{area:>6} {count:>6} {excess:>8} {perimeter:>11.4} {:>12.6}",
            excess.abs() / perimeter
        );
    }
}
