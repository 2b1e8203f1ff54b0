//! Localization operators in the Hermite basis.
//!
//! The operator cuts a transform to a phase-space region and transforms
//! back; its Galerkin matrix over the first M Hermite functions is
//! `A[j][k] = integral_Omega V_g h_j conj(V_g h_k)`. Entries are assembled
//! by product quadrature. On centered disks and annuli the uniform angular
//! grid collapses the angular sum to the selection rule r - r' = j - k, so
//! the matrix is banded with the window's top index as bandwidth (diagonal
//! for a single Hermite mode) and assembly reduces to radial integrals; a
//! dense node-sum path covers every other shape and doubles as an honest
//! cross-check of the reduction.
//!
//! Assembly is deterministic to the bit under threading: node sums run in a
//! fixed order inside each entry and threads only split across entries.

use crate::domains::Domain;
use crate::phasespace::{stft_window, WindowSpec};
use crate::specfun::{gauss_legendre, laguerre_fn};
use crate::{invalid, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Assembled Galerkin matrix with bookkeeping.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    pub matrix: DMatrix<Complex64>,
    pub dim: usize,
    pub window_label: String,
    pub domain_descriptor: String,
    pub trace: f64,
    /// Measure minus trace: the operator mass carried by Hermite modes
    /// beyond M. Nonnegative up to quadrature roundoff.
    pub tail_mass: f64,
    pub warnings: Vec<String>,
}

/// Knobs for [`assemble`]. `quad` overrides the default product orders
/// (radial x angular on circular shapes, per-axis otherwise);
/// `force_dense` disables the radial reduction so the full node sum is
/// evaluated even where the band structure is available.
#[derive(Debug, Clone, Default)]
pub struct AssemblyOptions {
    pub quad: Option<(usize, usize)>,
    pub force_dense: bool,
}

/// Default product-quadrature orders for a Galerkin dimension `m`.
pub fn default_quad_orders(domain: &Domain, m: usize) -> (usize, usize) {
    if domain.is_rotation_invariant() {
        (4 * m + 32, (4 * m).max(64))
    } else {
        (4 * m + 32, 4 * m + 32)
    }
}

/// Assemble the M x M localization matrix of `window` over `domain`.
///
/// Requires `m >= domain.n_omega()`: with fewer modes the matrix cannot
/// carry the operator's expected mass and every spectral statement
/// downstream degrades silently.
pub fn assemble(
    window: &WindowSpec,
    domain: &Domain,
    m: usize,
    opts: &AssemblyOptions,
) -> Result<ToeplitzMatrix> {
    if m == 0 {
        return Err(invalid("assemble: dimension must be positive"));
    }
    let n_omega = domain.n_omega();
    if m < n_omega {
        return Err(invalid(format!(
            "assemble: dimension {m} below expected count {n_omega} for {}",
            domain.descriptor()
        )));
    }
    let (n1, n2) = opts.quad.unwrap_or_else(|| default_quad_orders(domain, m));
    let band = window.max_index();
    // The radial reduction is exact only while the angular grid cannot
    // alias a nonzero product frequency onto zero.
    let fast_ok =
        domain.is_rotation_invariant() && !opts.force_dense && n2 > m - 1 + band;

    let matrix = if fast_ok {
        let (inner, outer) = match domain {
            Domain::Disk { radius } => (0.0, *radius),
            Domain::Annulus { inner, outer } => (*inner, *outer),
            _ => unreachable!(),
        };
        assemble_radial(window, inner, outer, m, n1)?
    } else {
        assemble_dense(window, domain, m, n1, n2)?
    };

    let mut warnings = Vec::new();
    let mut trace = 0.0;
    for j in 0..m {
        let d = matrix[(j, j)];
        if d.im.abs() > 1e-10 {
            warnings.push(format!(
                "diagonal entry {j} has imaginary part {:.3e}",
                d.im
            ));
        }
        trace += d.re;
    }
    let measure = domain.measure();
    let tail_mass = measure - trace;
    if tail_mass < -1e-6 * measure.max(1.0) {
        return Err(Error::Numerical(format!(
            "assembled trace {trace} exceeds domain measure {measure}"
        )));
    }
    if tail_mass > 0.01 * measure {
        warnings.push(format!(
            "tail mass {tail_mass:.3e} above 1% of measure; increase dimension beyond {m}"
        ));
    }
    Ok(ToeplitzMatrix {
        matrix,
        dim: m,
        window_label: window.label().to_string(),
        domain_descriptor: domain.descriptor(),
        trace,
        tail_mass,
        warnings,
    })
}

/// Radial reduction on centered circular shapes: every entry is a short
/// coefficient sum over radial integrals of normalized Laguerre functions.
fn assemble_radial(
    window: &WindowSpec,
    inner: f64,
    outer: f64,
    m: usize,
    n_radial: usize,
) -> Result<DMatrix<Complex64>> {
    let rule = gauss_legendre(n_radial, inner, outer)?;
    let coeffs = window.coeffs();
    let band = window.max_index();
    let sigma = |j: usize, r: usize| -> f64 {
        if r > j && (r - j) % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    };
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|j| (j..m.min(j + band + 1)).map(move |k| (j, k)))
        .collect();
    let computed: Vec<(usize, usize, Complex64)> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let d = k - j; // r' = r - (j - k) = r + d
            let mut acc = Complex64::new(0.0, 0.0);
            for (r, c) in coeffs.iter().enumerate() {
                let rp = r + d;
                if rp > band || c.norm() == 0.0 || coeffs[rp].norm() == 0.0 {
                    continue;
                }
                let radial: f64 = rule
                    .nodes()
                    .iter()
                    .zip(rule.weights())
                    .fold(0.0, |s, (&t, &w)| {
                        let x = PI * t * t;
                        s + w * t
                            * laguerre_fn(j.min(r), j.abs_diff(r), x)
                            * laguerre_fn(k.min(rp), k.abs_diff(rp), x)
                    });
                acc += c.conj() * coeffs[rp] * (sigma(j, r) * sigma(k, rp) * radial);
            }
            (j, k, 2.0 * PI * acc)
        })
        .collect();
    let mut matrix = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for (j, k, v) in computed {
        matrix[(j, k)] = v;
        if j != k {
            matrix[(k, j)] = v.conj();
        }
    }
    Ok(matrix)
}

/// Literal node sum over the domain quadrature. Transform values are
/// precomputed per (mode, node); the symplectic phase cancels inside each
/// product so no separate gauge handling is needed.
fn assemble_dense(
    window: &WindowSpec,
    domain: &Domain,
    m: usize,
    n1: usize,
    n2: usize,
) -> Result<DMatrix<Complex64>> {
    let dq = domain.quadrature(n1, n2)?;
    let vals: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|j| dq.nodes.iter().map(|&p| stft_window(window, j, p)).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|j| (j..m).map(move |k| (j, k)))
        .collect();
    let computed: Vec<(usize, usize, Complex64)> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &w) in dq.weights.iter().enumerate() {
                acc += w * vals[j][idx] * vals[k][idx].conj();
            }
            (j, k, acc)
        })
        .collect();
    let mut matrix = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for (j, k, v) in computed {
        matrix[(j, k)] = v;
        if j != k {
            matrix[(k, j)] = v.conj();
        }
    }
    Ok(matrix)
}

/// Eigendecomposition of an assembled matrix, sorted by descending
/// eigenvalue with a deterministic tie rule.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Descending; clamped to [0, 1] after validation.
    pub eigenvalues: Vec<f64>,
    /// Column i pairs with `eigenvalues[i]`, phase-normalized so the
    /// largest-modulus component is positive real.
    pub eigenvectors: DMatrix<Complex64>,
    /// Hermite index of the largest-modulus component per column.
    pub dominant_index: Vec<usize>,
    /// max_i || A v_i - lambda_i v_i ||_2
    pub residual: f64,
    pub window_label: String,
    pub domain_descriptor: String,
    pub warnings: Vec<String>,
}

/// Hermitian eigendecomposition with deterministic ordering: eigenvalues
/// descend; runs closer than 1e-12 are reordered by ascending dominant
/// Hermite index so degenerate plateaus come out in a stable order.
///
/// Fails if the spectral residual exceeds 1e-9 times the Frobenius norm,
/// if the eigenvalue sum drifts from the trace, or if an eigenvalue leaves
/// [0, 1] by more than 1e-8.
pub fn eigendecompose(t: &ToeplitzMatrix) -> Result<Spectrum> {
    let m = t.dim;
    let eig = nalgebra::SymmetricEigen::new(t.matrix.clone());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let dominant = |col: usize| -> usize {
        let v = eig.eigenvectors.column(col);
        let mut best = 0usize;
        let mut best_mag = -1.0;
        for k in 0..m {
            let mag = v[k].norm();
            if mag > best_mag + 1e-15 {
                best_mag = mag;
                best = k;
            }
        }
        best
    };

    // Stable tie handling: group runs of eigenvalues within 1e-12, order
    // each run by dominant Hermite index.
    let mut i = 0;
    while i < m {
        let mut j = i + 1;
        while j < m
            && (eig.eigenvalues[order[j - 1]] - eig.eigenvalues[order[j]]).abs() <= 1e-12
        {
            j += 1;
        }
        if j - i > 1 {
            order[i..j].sort_by_key(|&c| dominant(c));
        }
        i = j;
    }

    let mut eigenvalues = Vec::with_capacity(m);
    let mut eigenvectors = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    let mut dominant_index = Vec::with_capacity(m);
    let mut warnings = Vec::new();
    for (slot, &col) in order.iter().enumerate() {
        let lam = eig.eigenvalues[col];
        if !(-1e-8..=1.0 + 1e-8).contains(&lam) {
            return Err(Error::Numerical(format!(
                "eigenvalue {lam} outside [0, 1] beyond tolerance"
            )));
        }
        if !(0.0..=1.0).contains(&lam) {
            warnings.push(format!("eigenvalue {lam:.3e} clamped into [0, 1]"));
        }
        eigenvalues.push(lam.clamp(0.0, 1.0));
        let d = dominant(col);
        dominant_index.push(d);
        let phase = {
            let lead = eig.eigenvectors[(d, col)];
            if lead.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                (lead / lead.norm()).conj()
            }
        };
        for k in 0..m {
            eigenvectors[(k, slot)] = eig.eigenvectors[(k, col)] * phase;
        }
    }

    let norm_a = t.matrix.norm();
    let mut residual: f64 = 0.0;
    for slot in 0..m {
        let v = eigenvectors.column(slot);
        let av = &t.matrix * v;
        let r = (&av - v * Complex64::from(eigenvalues[slot])).norm();
        residual = residual.max(r);
    }
    if residual > 1e-9 * norm_a.max(1.0) {
        return Err(Error::Numerical(format!(
            "eigen residual {residual:.3e} above 1e-9 * ||A||"
        )));
    }
    let lam_sum: f64 = eigenvalues.iter().sum();
    if (lam_sum - t.trace).abs() > 1e-9 * t.trace.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "eigenvalue sum {lam_sum} drifted from trace {}",
            t.trace
        )));
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        dominant_index,
        residual,
        window_label: t.window_label.clone(),
        domain_descriptor: t.domain_descriptor.clone(),
        warnings,
    })
}

/// Number of eigenvalues above `1 - delta`. The plateau comparison against
/// the domain measure uses `delta = 1/2`.
pub fn weyl_count(eigenvalues: &[f64], delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("weyl_count: delta must be in (0,1), got {delta}")));
    }
    Ok(eigenvalues.iter().filter(|&&l| l > 1.0 - delta).count())
}

/// Disk eigenvalue of the level-`level` localization operator at Hermite
/// index `j`: a single radial integral of a squared normalized Laguerre
/// function over `[0, pi R^2]`. For level 0 this is the regularized lower
/// incomplete gamma function.
pub fn mu_radial(level: usize, j: usize, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(invalid(format!("mu_radial: radius must be positive, got {radius}")));
    }
    let n = j.min(level);
    let a = j.abs_diff(level);
    // the integrand's mass sits below mean + O(sqrt(mean)); the rest of
    // [0, pi R^2] carries less than 1e-300, so truncate there and keep the
    // node density matched to the support instead of the full interval
    let mean = (j + level + 1) as f64;
    let x_hi = (PI * radius * radius).min(mean + 40.0 * mean.sqrt() + 60.0);
    // degree budget: polynomial part j + level, exponential part ~1.4 x_hi
    let order = x_hi.ceil() as usize + 2 * j.max(level) + 48;
    let rule = gauss_legendre(order, 0.0, x_hi)?;
    Ok(rule.integrate(|x| laguerre_fn(n, a, x).powi(2)).clamp(0.0, 1.0))
}

/// Restricted Gram of selected eigenfunctions over the domain, evaluated
/// with a quadrature of different orders than assembly so agreement is
/// evidence rather than tautology.
#[derive(Debug, Clone)]
pub struct DoubleOrthogonalityReport {
    pub indices: Vec<usize>,
    pub gram: DMatrix<Complex64>,
    /// max_i | G[i][i] - lambda_i |
    pub max_diag_deviation: f64,
    /// max_{i != j} | G[i][j] |
    pub max_offdiag: f64,
}

/// Check that eigenfunctions restricted to the domain stay orthogonal with
/// squared norms equal to their eigenvalues.
pub fn double_orthogonality_check(
    window: &WindowSpec,
    domain: &Domain,
    spectrum: &Spectrum,
    indices: &[usize],
    quad: Option<(usize, usize)>,
) -> Result<DoubleOrthogonalityReport> {
    let m = spectrum.eigenvalues.len();
    for &i in indices {
        if i >= m {
            return Err(invalid(format!("eigenfunction index {i} out of range (m = {m})")));
        }
    }
    let (d1, d2) = default_quad_orders(domain, m);
    // offset by odd amounts so node sets never coincide with assembly's
    let (n1, n2) = quad.unwrap_or((d1 + 15, d2 + 13));
    let dq = domain.quadrature(n1, n2)?;

    // eigenfunction transform values at nodes
    let fvals: Vec<Vec<Complex64>> = indices
        .par_iter()
        .map(|&i| {
            dq.nodes
                .iter()
                .map(|&p| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..m {
                        let c = spectrum.eigenvectors[(k, i)];
                        if c.norm() > 0.0 {
                            acc += c * stft_window(window, k, p);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let nn = indices.len();
    let mut gram = DMatrix::from_element(nn, nn, Complex64::new(0.0, 0.0));
    let mut max_diag_deviation: f64 = 0.0;
    let mut max_offdiag: f64 = 0.0;
    for a in 0..nn {
        for b in 0..nn {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &w) in dq.weights.iter().enumerate() {
                acc += w * fvals[a][idx] * fvals[b][idx].conj();
            }
            gram[(a, b)] = acc;
            if a == b {
                max_diag_deviation =
                    max_diag_deviation.max((acc.re - spectrum.eigenvalues[indices[a]]).abs());
            } else {
                max_offdiag = max_offdiag.max(acc.norm());
            }
        }
    }
    Ok(DoubleOrthogonalityReport {
        indices: indices.to_vec(),
        gram,
        max_diag_deviation,
        max_offdiag,
    })
}

/// CSV writer: `j,lambda` rows under `# key=value` metadata.
pub fn write_spectrum_csv(s: &Spectrum, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# m={}", s.eigenvalues.len())?;
    writeln!(out, "# window={}", s.window_label)?;
    writeln!(out, "# domain={}", s.domain_descriptor)?;
    writeln!(out, "j,lambda")?;
    for (j, l) in s.eigenvalues.iter().enumerate() {
        writeln!(out, "{j},{l}")?;
    }
    Ok(())
}

/// CSV writer for selected eigenvectors, one Hermite coefficient row per
/// line, eigenvectors across columns (re/im interleaved).
pub fn write_eigenvectors_csv(
    s: &Spectrum,
    indices: &[usize],
    out: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(out, "# m={}", s.eigenvalues.len())?;
    writeln!(out, "# window={}", s.window_label)?;
    writeln!(out, "# domain={}", s.domain_descriptor)?;
    let cols: Vec<String> = indices
        .iter()
        .flat_map(|i| [format!("v{i}_re"), format!("v{i}_im")])
        .collect();
    writeln!(out, "k,{}", cols.join(","))?;
    let m = s.eigenvalues.len();
    for k in 0..m {
        let mut row = vec![k.to_string()];
        for &i in indices {
            let v = s.eigenvectors[(k, i)];
            row.push(format!("{}", v.re));
            row.push(format!("{}", v.im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::regularized_lower_gamma;
    use approx::assert_abs_diff_eq;

    fn disk_of_area(area: f64) -> Domain {
        Domain::disk((area / PI).sqrt()).unwrap()
    }

    #[test]
    fn gaussian_window_disk_matrix_is_gamma_diagonal() {
        // h_0 over a disk of area 4: diagonal entries are P(j+1, 4).
        let w = WindowSpec::hermite(0);
        let d = disk_of_area(4.0);
        let t = assemble(&w, &d, 32, &AssemblyOptions::default()).unwrap();
        for j in 0..32 {
            for k in 0..32 {
                if j == k {
                    let expect = regularized_lower_gamma(j, 4.0).unwrap();
                    assert_abs_diff_eq!(t.matrix[(j, j)].re, expect, epsilon = 1e-10);
                } else {
                    assert_eq!(t.matrix[(j, k)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert!(t.tail_mass >= 0.0 && t.tail_mass < 1e-9, "tail {}", t.tail_mass);
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn dense_path_reproduces_diagonal_disk_case() {
        let w = WindowSpec::hermite(0);
        let d = disk_of_area(4.0);
        let opts = AssemblyOptions {
            force_dense: true,
            quad: Some((90, 128)),
        };
        let t = assemble(&w, &d, 12, &opts).unwrap();
        for j in 0..12 {
            let expect = regularized_lower_gamma(j, 4.0).unwrap();
            assert_abs_diff_eq!(t.matrix[(j, j)].re, expect, epsilon = 1e-9);
            for k in 0..12 {
                if k != j {
                    assert!(
                        t.matrix[(j, k)].norm() < 1e-9,
                        "off-diagonal ({j},{k}) = {}",
                        t.matrix[(j, k)]
                    );
                }
            }
        }
    }

    #[test]
    fn fast_and_dense_paths_agree_on_annulus_with_mixed_window() {
        let w = WindowSpec::from_coeffs(vec![
            Complex64::new(0.8, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.6),
        ])
        .unwrap();
        let d = Domain::annulus(0.8, 1.6).unwrap();
        let quad = Some((72, 64));
        let fast = assemble(&w, &d, 10, &AssemblyOptions { quad, force_dense: false }).unwrap();
        let dense = assemble(&w, &d, 10, &AssemblyOptions { quad, force_dense: true }).unwrap();
        let diff = (&fast.matrix - &dense.matrix).norm();
        assert!(diff < 1e-12, "paths disagree by {diff}");
        // band structure: |j - k| > 2 entries vanish
        for j in 0..10usize {
            for k in 0..10usize {
                if j.abs_diff(k) > 2 {
                    assert_eq!(fast.matrix[(j, k)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn rect_entries_match_riemann_oracle() {
        // independent oracle: 400 x 400 midpoint Riemann sum on the square
        let w = WindowSpec::hermite(1);
        let d = Domain::rect(-1.0, 1.0, -1.0, 1.0).unwrap();
        let t = assemble(&w, &d, 48, &AssemblyOptions::default()).unwrap();
        let n = 400usize;
        let h = 2.0 / n as f64;
        for &(j, k) in &[(0usize, 0usize), (1, 1), (3, 1), (5, 2)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    let p = crate::phasespace::PhasePoint::new(
                        -1.0 + (a as f64 + 0.5) * h,
                        -1.0 + (b as f64 + 0.5) * h,
                    );
                    acc += h * h * stft_window(&w, j, p) * stft_window(&w, k, p).conj();
                }
            }
            let got = t.matrix[(j, k)];
            assert!(
                (got - acc).norm() < 1e-5,
                "entry ({j},{k}): {got} vs oracle {acc}"
            );
        }
    }

    #[test]
    fn dimension_below_expected_count_is_rejected() {
        let w = WindowSpec::hermite(0);
        let d = disk_of_area(20.0);
        assert!(assemble(&w, &d, 19, &AssemblyOptions::default()).is_err());
        assert!(assemble(&w, &d, 0, &AssemblyOptions::default()).is_err());
    }

    #[test]
    fn short_dimension_reports_tail_warning() {
        let w = WindowSpec::hermite(0);
        let d = disk_of_area(4.0);
        let t = assemble(&w, &d, 4, &AssemblyOptions::default()).unwrap();
        assert!(t.tail_mass > 0.04);
        assert!(!t.warnings.is_empty());
    }

    #[test]
    fn two_by_two_closed_form_eigenpairs() {
        let mut matrix = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        matrix[(0, 0)] = Complex64::new(0.7, 0.0);
        matrix[(0, 1)] = Complex64::new(0.1, 0.0);
        matrix[(1, 0)] = Complex64::new(0.1, 0.0);
        matrix[(1, 1)] = Complex64::new(0.3, 0.0);
        let t = ToeplitzMatrix {
            matrix,
            dim: 2,
            window_label: "test".into(),
            domain_descriptor: "test".into(),
            trace: 1.0,
            tail_mass: 0.0,
            warnings: vec![],
        };
        let s = eigendecompose(&t).unwrap();
        let root = 0.05f64.sqrt();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.5 + root, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.5 - root, epsilon = 1e-12);
        assert_eq!(s.dominant_index, vec![0, 1]);
        // phase normalization: dominant components positive real
        assert!(s.eigenvectors[(0, 0)].re > 0.0);
        assert_abs_diff_eq!(s.eigenvectors[(0, 0)].im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_eigenvalues_order_by_dominant_index() {
        let mut matrix = DMatrix::from_element(3, 3, Complex64::new(0.0, 0.0));
        matrix[(0, 0)] = Complex64::new(0.5, 0.0);
        matrix[(1, 1)] = Complex64::new(0.8, 0.0);
        matrix[(2, 2)] = Complex64::new(0.5, 0.0);
        let t = ToeplitzMatrix {
            matrix,
            dim: 3,
            window_label: "test".into(),
            domain_descriptor: "test".into(),
            trace: 1.8,
            tail_mass: 0.0,
            warnings: vec![],
        };
        let s = eigendecompose(&t).unwrap();
        assert_eq!(s.eigenvalues, vec![0.8, 0.5, 0.5]);
        assert_eq!(s.dominant_index, vec![1, 0, 2]);
    }

    #[test]
    fn spectrum_of_disk_operator_lands_in_unit_interval() {
        let w = WindowSpec::hermite(1);
        let d = disk_of_area(6.0);
        let t = assemble(&w, &d, 40, &AssemblyOptions::default()).unwrap();
        let s = eigendecompose(&t).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| (0.0..=1.0).contains(&l)));
        // descending up to the 1e-12 tie regrouping
        assert!(s.eigenvalues.windows(2).all(|p| p[0] >= p[1] - 1e-12));
        let sum: f64 = s.eigenvalues.iter().sum();
        assert_abs_diff_eq!(sum, t.trace, epsilon = 1e-9);
    }

    #[test]
    fn disk_eigenvalues_by_radial_integral_match_gamma() {
        for &(j, area) in &[(0usize, 1.0), (3, 1.0), (7, 10.0), (17, 10.0)] {
            let radius = (area / PI).sqrt();
            let got = mu_radial(0, j, radius).unwrap();
            let expect = regularized_lower_gamma(j, area).unwrap();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
        }
        // symmetry in (level, index)
        let a = mu_radial(2, 5, 1.3).unwrap();
        let b = mu_radial(5, 2, 1.3).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        assert!(mu_radial(1, 0, 0.0).is_err());
    }

    #[test]
    fn plateau_count_thresholds() {
        let eigs = [0.99, 0.9, 0.6, 0.5, 0.2, 0.01];
        assert_eq!(weyl_count(&eigs, 0.5).unwrap(), 3); // strictly above 0.5
        assert_eq!(weyl_count(&eigs, 0.05).unwrap(), 1);
        assert!(weyl_count(&eigs, 0.0).is_err());
        assert!(weyl_count(&eigs, 1.0).is_err());
    }

    #[test]
    fn restricted_eigenfunctions_stay_orthogonal() {
        let w = WindowSpec::hermite(0);
        let d = disk_of_area(4.0);
        let t = assemble(&w, &d, 16, &AssemblyOptions::default()).unwrap();
        let s = eigendecompose(&t).unwrap();
        let rep = double_orthogonality_check(&w, &d, &s, &[0, 1, 2, 3], None).unwrap();
        assert!(rep.max_diag_deviation < 1e-6, "diag dev {}", rep.max_diag_deviation);
        assert!(rep.max_offdiag < 1e-6, "offdiag {}", rep.max_offdiag);
        assert!(double_orthogonality_check(&w, &d, &s, &[99], None).is_err());
    }

    #[test]
    fn csv_writers_emit_metadata_then_rows() {
        let mut matrix = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        matrix[(0, 0)] = Complex64::new(0.9, 0.0);
        matrix[(1, 1)] = Complex64::new(0.4, 0.0);
        let t = ToeplitzMatrix {
            matrix,
            dim: 2,
            window_label: "hermite:0".into(),
            domain_descriptor: "disk:1".into(),
            trace: 1.3,
            tail_mass: 0.0,
            warnings: vec![],
        };
        let s = eigendecompose(&t).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# m=2\n"));
        assert!(text.contains("j,lambda\n0,0.9\n1,0.4\n"));
        let mut buf2 = Vec::new();
        write_eigenvectors_csv(&s, &[0], &mut buf2).unwrap();
        let text2 = String::from_utf8(buf2).unwrap();
        assert!(text2.contains("k,v0_re,v0_im"));
    }
}
