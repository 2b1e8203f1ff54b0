//! Windows, phase-space points, and short-time Fourier transforms.
//!
//! Windows live in the span of the Hermite functions and are kept unit-norm.
//! The transform of one Hermite function against another has a closed polar
//! form built on the weighted polyanalytic basis of [`crate::specfun`]; a
//! direct quadrature of the defining integral is kept alongside as a slow
//! cross-check. All phase and conjugation bookkeeping is owned by this
//! module: callers work with plain points and window handles.

use crate::specfun::{complex_hermite_weighted, gauss_legendre, hermite_function};
use crate::{invalid, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;

/// Point (x, xi) of the time-frequency plane, identified with x + i xi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub fn new(x: f64, xi: f64) -> Self {
        PhasePoint { x, xi }
    }

    pub fn from_complex(z: Complex64) -> Self {
        PhasePoint { x: z.re, xi: z.im }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.xi)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.xi)
    }

    /// Counterclockwise rotation by `theta` about the origin.
    pub fn rotate(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        PhasePoint {
            x: c * self.x - s * self.xi,
            xi: s * self.x + c * self.xi,
        }
    }
}

impl std::ops::Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint {
            x: self.x - rhs.x,
            xi: self.xi - rhs.xi,
        }
    }
}

/// Window as a finite Hermite expansion `g = sum_r c_r h_r`, stored
/// unit-norm. Construction normalizes and records the factor it applied.
#[derive(Debug, Clone)]
pub struct WindowSpec {
    coeffs: Vec<Complex64>,
    normalization_applied: f64,
    label: String,
}

impl WindowSpec {
    /// Pure Hermite window `h_r`.
    pub fn hermite(r: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); r + 1];
        coeffs[r] = Complex64::new(1.0, 0.0);
        WindowSpec {
            coeffs,
            normalization_applied: 1.0,
            label: format!("hermite:{r}"),
        }
    }

    /// Window from raw Hermite coefficients (index = Hermite order).
    /// Trailing zeros are dropped; the vector is scaled to unit norm and the
    /// applied factor retained in [`WindowSpec::normalization_applied`].
    pub fn from_coeffs(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(invalid("window: coefficients must have positive finite norm"));
        }
        let factor = norm_sq.sqrt().recip();
        for c in &mut coeffs {
            *c *= factor;
        }
        Ok(WindowSpec {
            coeffs,
            normalization_applied: factor,
            label: "custom".to_string(),
        })
    }

    /// Load a window from a text file with one `r real imag` triple per line.
    /// Blank lines and `#` comments are skipped; duplicate indices are an
    /// error. The result is normalized like [`WindowSpec::from_coeffs`].
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut coeffs: Vec<Complex64> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(invalid(format!(
                    "{}:{}: expected `r real imag`, got {:?}",
                    path.display(),
                    lineno + 1,
                    raw
                )));
            }
            let r: usize = fields[0]
                .parse()
                .map_err(|_| invalid(format!("{}:{}: bad index", path.display(), lineno + 1)))?;
            let re: f64 = fields[1]
                .parse()
                .map_err(|_| invalid(format!("{}:{}: bad real part", path.display(), lineno + 1)))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|_| invalid(format!("{}:{}: bad imag part", path.display(), lineno + 1)))?;
            if seen.contains(&r) {
                return Err(invalid(format!(
                    "{}:{}: duplicate coefficient index {r}",
                    path.display(),
                    lineno + 1
                )));
            }
            seen.push(r);
            if coeffs.len() <= r {
                coeffs.resize(r + 1, Complex64::new(0.0, 0.0));
            }
            coeffs[r] = Complex64::new(re, im);
        }
        let mut w = WindowSpec::from_coeffs(coeffs)?;
        w.label = format!("file:{}", path.display());
        Ok(w)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Highest Hermite order present.
    pub fn max_index(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Factor by which the input coefficients were scaled at construction;
    /// 1.0 means they already had unit norm.
    pub fn normalization_applied(&self) -> f64 {
        self.normalization_applied
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Some(r) when the window is a single Hermite mode of unit-modulus
    /// coefficient; localization spectra are then diagonal on centered disks.
    pub fn pure_hermite_index(&self) -> Option<usize> {
        let mut found = None;
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.norm() > 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some(r);
            }
        }
        found
    }

    /// Time-domain evaluation `g(t)`.
    pub fn evaluate_time(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.norm() > 0.0 {
                acc += c * hermite_function(r, t);
            }
        }
        acc
    }
}

/// Closed-form transform of the Hermite function `h_j` against the Hermite
/// window `h_r`, at phase-space point `p`.
///
/// In the polar form used here this is the weighted polyanalytic basis
/// function evaluated at the conjugate point, times the symplectic phase
/// `e^{-i pi x xi}`. The modulus is radial for every (j, r); the winding
/// number around the origin is r - j.
pub fn stft_hermite(j: usize, r: usize, p: PhasePoint) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -PI * p.x * p.xi);
    phase * complex_hermite_weighted(j, r, p.to_complex().conj())
}

/// Transform of `h_j` against an arbitrary window (antilinear in the
/// window's coefficients).
pub fn stft_window(window: &WindowSpec, j: usize, p: PhasePoint) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, c) in window.coeffs().iter().enumerate() {
        if c.norm() > 0.0 {
            acc += c.conj() * stft_hermite(j, r, p);
        }
    }
    acc
}

/// Numeric transform value with an order-doubling error estimate.
#[derive(Debug, Clone)]
pub struct StftEstimate {
    pub value: Complex64,
    pub error_estimate: f64,
    pub warning: Option<String>,
}

/// Direct quadrature of the defining integral
/// `integral f(t) conj(g(t - x)) e^{-2 pi i xi t} dt` with `f = h_j`.
///
/// The integrand is sampled on a Gauss-Legendre rule centered at the overlap
/// peak `t = x/2`, at two orders (n and 2n); their difference is reported as
/// the error estimate and a warning is attached when it exceeds 1e-8. This
/// is the slow independent oracle for [`stft_window`].
pub fn stft_numeric(window: &WindowSpec, j: usize, p: PhasePoint) -> Result<StftEstimate> {
    let reach = |m: usize| ((2.0 * m as f64 + 1.0) / (2.0 * PI)).sqrt();
    let half_width = reach(j) + reach(window.max_index()) + 6.0;
    let center = p.x / 2.0;
    let n_base = 128usize.max((8.0 * 2.0 * half_width * (p.xi.abs() + 1.0)).ceil() as usize + 32);

    let eval = |n: usize| -> Result<Complex64> {
        let rule = gauss_legendre(n, center - half_width, center + half_width)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let f = hermite_function(j, t);
            let g = window.evaluate_time(t - p.x).conj();
            let osc = Complex64::from_polar(1.0, -2.0 * PI * p.xi * t);
            acc += w * f * g * osc;
        }
        Ok(acc)
    };

    let coarse = eval(n_base)?;
    let fine = eval(2 * n_base)?;
    let error_estimate = (fine - coarse).norm();
    let warning = (error_estimate > 1e-8).then(|| {
        format!(
            "quadrature self-estimate {error_estimate:.3e} above 1e-8 \
             (order {n_base} vs {})",
            2 * n_base
        )
    });
    Ok(StftEstimate {
        value: fine,
        error_estimate,
        warning,
    })
}

/// Reproducing kernel of the transform range space,
/// `K(p, q) = <pi(q) g, pi(p) g>`, computed from the transform of the window
/// against itself via shift covariance. Diagonal values are exactly the
/// squared window norm, i.e. 1.
pub fn reproducing_kernel(window: &WindowSpec, p: PhasePoint, q: PhasePoint) -> Complex64 {
    let d = p - q;
    let phase = Complex64::from_polar(1.0, -2.0 * PI * q.x * (p.xi - q.xi));
    let mut vgg = Complex64::new(0.0, 0.0);
    for (jj, c) in window.coeffs().iter().enumerate() {
        if c.norm() > 0.0 {
            vgg += c * stft_window(window, jj, d);
        }
    }
    phase * vgg
}

/// Strip the symplectic phase from a kernel value: multiplies by
/// `e^{i pi (x_q xi_q - x_p xi_p)}`. Applied to kernels evaluated at
/// conjugated arguments, it converts transform-side kernels to their
/// analytic (entire-function) normal form.
pub fn gauge_renormalize(k: Complex64, p: PhasePoint, q: PhasePoint) -> Complex64 {
    k * Complex64::from_polar(1.0, PI * (q.x * q.xi - p.x * p.xi))
}

/// Metaplectic rotation of a window by angle `theta`: the Hermite modes are
/// eigenvectors, `c_r -> e^{i r theta} c_r`. Composing with a plane rotation
/// of the evaluation point gives the covariance identity checked in tests.
pub fn metaplectic_rotate(window: &WindowSpec, theta: f64) -> WindowSpec {
    let coeffs = window
        .coeffs()
        .iter()
        .enumerate()
        .map(|(r, c)| c * Complex64::from_polar(1.0, r as f64 * theta))
        .collect();
    WindowSpec {
        coeffs,
        normalization_applied: window.normalization_applied,
        label: format!("{}*rot", window.label),
    }
}
