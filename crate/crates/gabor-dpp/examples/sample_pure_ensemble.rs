//! Draw exact samples from the 30-point finite Ginibre ensemble (level 0)
//! and print one configuration as an ASCII scatter. Points repel each
//! other and fill a disk of area 30 almost uniformly.
//!
//! Run with: cargo run --example sample_pure_ensemble

use gabor_dpp::ensembles::pure_poly_kernel;
use gabor_dpp::sampling::sample_dpp;
use std::f64::consts::PI;

fn main() {
    let n = 30usize;
    let kernel = pure_poly_kernel(0, n).unwrap();
    let batch = sample_dpp(&kernel, 42, 4).unwrap();
    println!(
        "kernel {}  bounding radius {:.3}  acceptance {:.4}",
        batch.kernel_descriptor,
        batch.bounding_radius,
        batch.acceptance_rate()
    );

    let config = &batch.configurations[0];
    println!("configuration 0: {} points\n", config.points.len());

    // ASCII scatter over [-e, e]^2 where e is the matched disk radius + 1
    let extent = (n as f64 / PI).sqrt() + 1.0;
    let (w, h) = (56usize, 28usize);
    let mut grid = vec![vec![' '; w]; h];
    for p in &config.points {
        let col = ((p.x + extent) / (2.0 * extent) * (w as f64 - 1.0)).round();
        let row = ((extent - p.xi) / (2.0 * extent) * (h as f64 - 1.0)).round();
        if (0.0..w as f64).contains(&col) && (0.0..h as f64).contains(&row) {
            grid[row as usize][col as usize] = '*';
        }
    }
    for row in grid {
        println!("|{}|", row.into_iter().collect::<String>());
    }

    let mean_r2: f64 =
        config.points.iter().map(|p| p.x * p.x + p.xi * p.xi).sum::<f64>() / n as f64;
    println!(
        "\nmean squared radius {:.3} (uniform disk of area {n} gives {:.3})",
        mean_r2,
        n as f64 / (2.0 * PI)
    );
}
