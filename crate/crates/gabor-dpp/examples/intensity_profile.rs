//! Radial intensity profile of pure ensembles: inside the matched disk the
//! expected point density is flat at 1 (in phase-space area units), and it
//! falls to 0 across a boundary layer whose width shrinks relative to the
//! disk as N grows. Higher levels ripple more near the edge.
//!
//! Run with: cargo run --example intensity_profile

use gabor_dpp::ensembles::pure_poly_kernel;
use gabor_dpp::phasespace::PhasePoint;
use std::f64::consts::PI;

fn main() {
    let n = 50usize;
    let matched = (n as f64 / PI).sqrt();
    let k0 = pure_poly_kernel(0, n).unwrap();
    let k1 = pure_poly_kernel(1, n).unwrap();

    println!("N = {n}, matched disk radius {matched:.4}\n");
    println!("{:>6} {:>12} {:>12}", "r", "level 0", "level 1");
    let steps = 30usize;
    for i in 0..=steps {
        let r = (matched + 2.0) * i as f64 / steps as f64;
        let p = PhasePoint::new(r, 0.0);
        let (a, b) = (k0.intensity(p), k1.intensity(p));
        let marker = if r <= matched { "|" } else { " " };
        println!("{r:>6.3} {a:>12.6} {b:>12.6}  {marker}");
    }
    println!("\n('|' marks radii inside the matched disk)");
}
