//! The transform of one Hermite function against another has a closed form
//! built from Laguerre functions. This example checks it against direct
//! numerical integration at a few phase-space points, then demonstrates two
//! structural identities: gauge invariance of intensities and rotation
//! covariance via phased Hermite coefficients.
//!
//! Run with: cargo run --example transform_identities

use gabor_dpp::phasespace::{
    gauge_renormalize, metaplectic_rotate, reproducing_kernel, stft_hermite, stft_numeric,
    stft_window, PhasePoint, WindowSpec,
};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() {
    println!("closed form vs direct integration:");
    for &(j, r, x, xi) in &[(0usize, 0usize, 0.3, -0.7), (3, 1, 1.1, 0.4), (6, 2, -0.8, 1.3)] {
        let p = PhasePoint::new(x, xi);
        let closed = stft_hermite(j, r, p);
        let numeric = stft_numeric(&WindowSpec::hermite(r), j, p).unwrap();
        println!(
            "  j={j} r={r} at ({x:>4}, {xi:>4}):  {:.12}{:+.12}i   gap {:.2e}",
            closed.re,
            closed.im,
            (closed - numeric.value).norm()
        );
    }

    // the reproducing kernel is a pure phase times a Gaussian in the
    // point separation; gauge renormalization strips the phase without
    // changing the modulus
    let p = PhasePoint::new(0.4, -0.2);
    let q = PhasePoint::new(-0.6, 0.9);
    let k = reproducing_kernel(&WindowSpec::hermite(0), p, q);
    let g = gauge_renormalize(k, p, q);
    println!("\nreproducing kernel at two points:");
    println!("  raw    {:.10}{:+.10}i  modulus {:.10}", k.re, k.im, k.norm());
    println!("  gauged {:.10}{:+.10}i  modulus {:.10}", g.re, g.im, g.norm());

    // rotating the phase plane equals phasing the window's Hermite
    // coefficients, up to an explicit symplectic phase factor
    let w = WindowSpec::from_coeffs(vec![
        Complex64::new(0.8, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(-0.3, 0.1),
    ])
    .unwrap();
    let theta = 1.1f64;
    let j = 4usize;
    let pr = p.rotate(theta);
    let lhs = stft_window(&w, j, pr);
    let rhs = Complex64::from_polar(1.0, PI * (p.x * p.xi - pr.x * pr.xi))
        * Complex64::from_polar(1.0, -(j as f64) * theta)
        * stft_window(&metaplectic_rotate(&w, -theta), j, p);
    println!("\nrotation covariance residual: {:.2e}", (lhs - rhs).norm());
}
