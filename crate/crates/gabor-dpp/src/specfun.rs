//! Scalar special functions and Gauss-Legendre quadrature.
//!
//! Everything downstream reduces to four ingredients: generalized Laguerre
//! polynomials, L2-normalized Hermite functions, a Gaussian-weighted
//! polyanalytic basis over the complex plane, and the regularized lower
//! incomplete gamma function. All functions here are pure and thread-safe;
//! quadrature rules are explicit values, not global caches.

use crate::{invalid, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One-dimensional quadrature rule: paired nodes and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of w_i * f(x_i), accumulated in node order so results are
    /// bit-stable across runs and thread counts.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(0.0, |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Gauss-Legendre rule with `n` points on `[a, b]`: integrates polynomials
/// of degree up to `2n - 1` exactly. Nodes are found by Newton iteration on
/// the Legendre recurrence, which is accurate to machine precision for the
/// orders used here (up to a few thousand points).
///
/// Errors when `n == 0` or `a >= b`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(invalid("gauss_legendre: need at least one node"));
    }
    if !(a < b) {
        return Err(invalid(format!(
            "gauss_legendre: empty interval [{a}, {b}]"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x decreases with i along (0, 1]; mirror onto the left half.
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Generalized Laguerre polynomial `L_j^alpha(x)` by the upward three-term
/// recurrence `(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}`.
/// The explicit alternating sum loses digits to cancellation once `x`
/// reaches the oscillatory range, so the recurrence is used uniformly.
///
/// Requires `j + alpha >= 0`.
pub fn laguerre(j: usize, alpha: f64, x: f64) -> Result<f64> {
    if (j as f64 + alpha) < 0.0 {
        return Err(invalid(format!(
            "laguerre: degree+alpha must be nonnegative, got j={j}, alpha={alpha}"
        )));
    }
    if j == 0 {
        return Ok(1.0);
    }
    let mut lk_minus = 1.0;
    let mut lk = 1.0 + alpha - x;
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * lk - (kf + alpha) * lk_minus) / (kf + 1.0);
        lk_minus = lk;
        lk = next;
    }
    Ok(lk)
}

/// L2-normalized Hermite function `h_r(t)` (Gaussian convention
/// `h_0(t) = 2^(1/4) exp(-pi t^2)`, so `||h_r||_2 = 1` for every r).
///
/// Evaluated through the weighted two-term recurrence
/// `h_{n+1} = (2 sqrt(pi) t h_n - sqrt(n) h_{n-1}) / sqrt(n+1)`,
/// which keeps the Gaussian factor inside and never overflows.
pub fn hermite_function(r: usize, t: f64) -> f64 {
    let h0 = std::f64::consts::SQRT_2.sqrt() * (-PI * t * t).exp();
    if r == 0 {
        return h0;
    }
    let two_sqrt_pi_t = 2.0 * PI.sqrt() * t;
    let mut prev = h0;
    let mut cur = two_sqrt_pi_t * h0; // h_1
    for n in 1..r {
        let nf = n as f64;
        let next = (two_sqrt_pi_t * cur - nf.sqrt() * prev) / (nf + 1.0).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// Log-gamma by the Lanczos approximation (g = 7, 9 terms), ~1e-15 relative
/// for x >= 1, which is the only range used here.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + 6.5;
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + acc.ln()
}

/// Normalized Laguerre function
/// `l_n^a(x) = sqrt(n!/(n+a)!) x^(a/2) e^(-x/2) L_n^a(x)`,
/// orthonormal on `(0, inf)` with respect to `dx`.
///
/// The start value is formed in log scale and the degree recurrence carries a
/// shared exponent, so arbitrarily large `a` (high basis index at a fixed
/// level) neither overflows nor underflows prematurely.
pub(crate) fn laguerre_fn(n: usize, a: usize, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let af = a as f64;
    if x == 0.0 {
        return if a == 0 { 1.0 } else { 0.0 };
    }
    // ln l_0^a(x)
    let mut escale = 0.5 * (af * x.ln() - ln_gamma(af + 1.0)) - 0.5 * x;
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + af - x) * cur - (kf * (kf + af)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + af)).sqrt();
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e280 {
            cur *= 1e-280;
            prev *= 1e-280;
            escale += 280.0 * std::f64::consts::LN_10;
        } else if mag != 0.0 && mag < 1e-280 {
            cur *= 1e280;
            prev *= 1e280;
            escale -= 280.0 * std::f64::consts::LN_10;
        }
    }
    cur * escale.exp()
}

/// Gaussian-weighted polyanalytic basis function: the bivariate Hermite
/// polynomial `H_{j,r}(z, conj z)` times `exp(-pi |z|^2 / 2)`.
///
/// In polar form this is `e^(i (j-r) arg z) * sigma * l_min^(|j-r|)(pi|z|^2)`
/// with `sigma = (-1)^(max(r-j, 0))` and `l` the normalized Laguerre function
/// above; the two defining branches (j >= r and j <= r) collapse to this one
/// expression and agree at `j == r`. The family is orthonormal over the
/// plane with respect to Lebesgue measure.
pub fn complex_hermite_weighted(j: usize, r: usize, z: Complex64) -> Complex64 {
    let n = j.min(r);
    let a = j.abs_diff(r);
    let radial = laguerre_fn(n, a, PI * z.norm_sqr());
    let sign = if r > j && (r - j) % 2 == 1 { -1.0 } else { 1.0 };
    let order = j as f64 - r as f64;
    sign * radial * Complex64::from_polar(1.0, order * z.arg())
}

/// Regularized lower incomplete gamma function at integer shape:
/// `P(j+1, s) = (1/j!) * integral_0^s t^j e^(-t) dt`.
///
/// Computed through the complementary partial exponential sum,
/// `P = 1 - e^(-s) * sum_(k<=j) s^k/k!`, with a log-sum-exp fallback once
/// `e^(-s)` approaches the underflow range. Absolute accuracy is at the
/// 1e-14 level throughout `j <= 200`, `s <= 1e3`.
///
/// Errors when `s < 0`.
pub fn regularized_lower_gamma(j: usize, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(invalid(format!(
            "regularized_lower_gamma: negative argument {s}"
        )));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let p = if s < 650.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=j {
            term *= s / k as f64;
            sum += term;
        }
        1.0 - (-s).exp() * sum
    } else {
        // log-sum-exp over ln(s^k/k!) keeps the k-sum finite for large s.
        let ln_s = s.ln();
        let mut ln_max = f64::NEG_INFINITY;
        let mut terms = Vec::with_capacity(j + 1);
        for k in 0..=j {
            let lt = k as f64 * ln_s - ln_gamma(k as f64 + 1.0);
            ln_max = ln_max.max(lt);
            terms.push(lt);
        }
        let scaled: f64 = terms.iter().map(|lt| (lt - ln_max).exp()).sum();
        1.0 - (ln_max - s + scaled.ln()).exp()
    };
    Ok(p.clamp(0.0, 1.0))
}
