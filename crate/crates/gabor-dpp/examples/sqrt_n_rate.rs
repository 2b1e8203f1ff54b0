//! The L1 distance between a pure ensemble's intensity and the indicator
//! of the matched disk grows like sqrt(N): the table below shows the
//! ratio D(r, N) / sqrt(N) settling to a level-dependent constant.
//!
//! Run with: cargo run --example sqrt_n_rate

use gabor_dpp::ensembles::{l1_deviation_pure, trace_distance_poly, IndexSet};
use std::f64::consts::PI;

fn main() {
    println!(
        "{:>5} {:>5} {:>16} {:>16} {:>9}",
        "level", "N", "D(r,N)", "D/sqrt(N)", "symdiff"
    );
    for level in 0..=2usize {
        for &n in &[25usize, 100, 400] {
            let radius = (n as f64 / PI).sqrt();
            let d = l1_deviation_pure(level, &IndexSet::first(n), radius).unwrap();
            // sanity: sorting disk eigenvalues picks exactly the first N modes
            let symdiff = trace_distance_poly(level, n).unwrap();
            println!(
                "{level:>5} {n:>5} {d:>16.10} {:>16.10} {symdiff:>9}",
                d / (n as f64).sqrt()
            );
        }
        println!();
    }
}
