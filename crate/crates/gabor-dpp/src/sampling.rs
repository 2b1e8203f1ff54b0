//! Exact samplers and radial statistics for the projection ensembles.
//!
//! Point configurations are drawn by the sequential conditional method for
//! projection kernels: each new point is proposed uniformly on a bounding
//! disk that carries all but 1e-6 of the kernel mass and accepted with
//! probability equal to the squared distance of its feature vector from the
//! span of the already-selected ones (an envelope bounded by 1 since
//! intensities never exceed 1). Radial statistics use the matching law of
//! independent radii: component j has CDF equal to the disk eigenvalue
//! curve, sampled by inverse transform through monotone cubic tables.
//!
//! Randomness comes from named counter streams keyed by (master seed,
//! sample index), so batches are reproducible point-for-point regardless of
//! thread count or order.

use crate::ensembles::{IndexSet, ProjectionKernel};
use crate::phasespace::{PhasePoint, WindowSpec};
use crate::rng::Stream;
use crate::specfun::{gauss_legendre, laguerre_fn, ln_gamma, regularized_lower_gamma};
use crate::toeplitz::mu_radial;
use crate::{invalid, Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// One sampled configuration: `rank` points tagged with the stream id that
/// produced them.
#[derive(Debug, Clone)]
pub struct PointConfiguration {
    pub sample_id: u64,
    pub points: Vec<PhasePoint>,
}

impl PointConfiguration {
    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.norm()).collect()
    }
}

/// A batch of configurations with provenance and acceptance statistics.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub configurations: Vec<PointConfiguration>,
    pub kernel_descriptor: String,
    pub master_seed: u64,
    pub proposals: u64,
    pub accepted: u64,
    pub bounding_radius: f64,
}

impl SampleBatch {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

const REJECTION_CAP: u64 = 1_000_000;

/// Smallest radius whose disk holds all but `tol` of the kernel mass,
/// found by doubling. For eigenfunction kernels the per-mode masses bound
/// the eigenfunction mass because the selected projection sits under the
/// full basis projection.
fn bounding_radius(kernel: &ProjectionKernel, tol: f64) -> Result<f64> {
    let tail = |radius: f64| -> Result<f64> {
        match kernel {
            ProjectionKernel::PurePoly { level, indices } => {
                let mut t = 0.0;
                for j in indices.iter() {
                    t += 1.0 - mu_radial(*level, j, radius)?;
                }
                Ok(t)
            }
            ProjectionKernel::WindowDomain { window, spectrum, .. } => {
                let m = spectrum.eigenvalues.len();
                let mut t = 0.0;
                for k in 0..m {
                    for (r, c) in window.coeffs().iter().enumerate() {
                        let w = c.norm_sqr();
                        if w > 0.0 {
                            t += w * (1.0 - mu_radial(r, k, radius)?);
                        }
                    }
                }
                Ok(t)
            }
        }
    };
    let mut radius: f64 = 2.0;
    for _ in 0..32 {
        if tail(radius)? <= tol {
            return Ok(radius);
        }
        radius *= std::f64::consts::SQRT_2; // doubles the area each step
    }
    Err(Error::Numerical(
        "bounding radius search did not converge".to_string(),
    ))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y.conj())
        .fold(Complex64::new(0.0, 0.0), |s, v| s + v)
}

/// Draw `n_samples` independent configurations from the projection
/// ensemble. Each configuration has exactly `kernel.rank()` points.
pub fn sample_dpp(
    kernel: &ProjectionKernel,
    master_seed: u64,
    n_samples: usize,
) -> Result<SampleBatch> {
    if n_samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let rank = kernel.rank();
    let r_b = bounding_radius(kernel, 1e-6)?;

    let results: Vec<Result<(PointConfiguration, u64)>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|sample_id| {
            let mut stream = Stream::labeled(master_seed, &format!("dpp/{sample_id}"));
            let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
            let mut points = Vec::with_capacity(rank);
            let mut proposals = 0u64;
            for _ in 0..rank {
                let mut rejections = 0u64;
                loop {
                    let s = r_b * stream.next_f64().sqrt();
                    let th = 2.0 * PI * stream.next_f64();
                    let p = PhasePoint::new(s * th.cos(), s * th.sin());
                    let u_accept = stream.next_f64();
                    proposals += 1;
                    let phi = kernel.features(p);
                    let mut resid = phi;
                    for u in &basis {
                        let c = dot(&resid, u);
                        for (rv, uv) in resid.iter_mut().zip(u) {
                            *rv -= c * uv;
                        }
                    }
                    let d: f64 = resid.iter().map(|v| v.norm_sqr()).sum();
                    if u_accept < d {
                        // second orthogonalization pass before normalizing
                        for u in &basis {
                            let c = dot(&resid, u);
                            for (rv, uv) in resid.iter_mut().zip(u) {
                                *rv -= c * uv;
                            }
                        }
                        let norm: f64 =
                            resid.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                        for v in &mut resid {
                            *v /= norm;
                        }
                        basis.push(resid);
                        points.push(p);
                        break;
                    }
                    rejections += 1;
                    if rejections >= REJECTION_CAP {
                        return Err(Error::Numerical(format!(
                            "sample {sample_id}: rejection cap {REJECTION_CAP} hit"
                        )));
                    }
                }
            }
            Ok((PointConfiguration { sample_id, points }, proposals))
        })
        .collect();

    let mut configurations = Vec::with_capacity(n_samples);
    let mut proposals = 0u64;
    for r in results {
        let (config, prop) = r?;
        configurations.push(config);
        proposals += prop;
    }
    let accepted = (n_samples * rank) as u64;
    Ok(SampleBatch {
        configurations,
        kernel_descriptor: kernel.descriptor(),
        master_seed,
        proposals,
        accepted,
        bounding_radius: r_b,
    })
}

// ── radial laws ──────────────────────────────────────────────────────────

const TABLE_KNOTS: usize = 4096;

/// Law of the independent radii attached to a pure-level ensemble:
/// component j has `P(Y_j <= s)` equal to the disk eigenvalue at radius s.
#[derive(Debug, Clone)]
pub struct RadialLaw {
    level: usize,
    indices: IndexSet,
    tables: Vec<CdfTable>,
}

#[derive(Debug, Clone)]
struct CdfTable {
    n: usize,
    a: usize,
    /// knot positions in x = pi s^2
    xs: Vec<f64>,
    /// cumulative integral of the squared normalized Laguerre function
    cdf: Vec<f64>,
    /// monotone cubic slopes for the inverse map u -> x (after filtering
    /// flat cells)
    inv_u: Vec<f64>,
    inv_x: Vec<f64>,
    inv_d: Vec<f64>,
}

/// Fritsch-Carlson monotone slopes for data (xs, ys) with xs strictly
/// increasing and ys nondecreasing.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    let h: Vec<f64> = (0..n - 1).map(|i| xs[i + 1] - xs[i]).collect();
    let sec: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    d[0] = sec[0];
    d[n - 1] = sec[n - 2];
    for i in 1..n - 1 {
        if sec[i - 1] * sec[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
        }
    }
    d
}

fn hermite_cubic(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + h * d0 * (t3 - 2.0 * t2 + t)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + h * d1 * (t3 - t2)
}

impl CdfTable {
    fn build(level: usize, j: usize) -> Result<CdfTable> {
        let n = j.min(level);
        let a = j.abs_diff(level);
        let mean = (n + n + a + 1) as f64;
        let x_max = mean + 40.0 * mean.sqrt() + 60.0;
        let cell = gauss_legendre(8, 0.0, 1.0)?;
        let mut xs = Vec::with_capacity(TABLE_KNOTS);
        let mut cdf = Vec::with_capacity(TABLE_KNOTS);
        xs.push(0.0);
        cdf.push(0.0);
        let h = x_max / (TABLE_KNOTS - 1) as f64;
        let mut acc = 0.0;
        for i in 1..TABLE_KNOTS {
            let lo = h * (i - 1) as f64;
            let piece: f64 = cell
                .nodes()
                .iter()
                .zip(cell.weights())
                .map(|(&t, &w)| w * h * laguerre_fn(n, a, lo + t * h).powi(2))
                .sum();
            acc += piece;
            xs.push(h * i as f64);
            cdf.push(acc.min(1.0));
        }
        if cdf[TABLE_KNOTS - 1] < 1.0 - 1e-9 {
            return Err(Error::Numerical(format!(
                "cdf table for (level {level}, mode {j}) tops out at {}",
                cdf[TABLE_KNOTS - 1]
            )));
        }
        // strictly increasing knots for the inverse map
        let mut inv_u = Vec::with_capacity(TABLE_KNOTS);
        let mut inv_x = Vec::with_capacity(TABLE_KNOTS);
        for i in 0..TABLE_KNOTS {
            if i == 0 || cdf[i] > *inv_u.last().unwrap() + 1e-15 {
                inv_u.push(cdf[i]);
                inv_x.push(xs[i]);
            }
        }
        let inv_d = pchip_slopes(&inv_u, &inv_x);
        Ok(CdfTable {
            n,
            a,
            xs,
            cdf,
            inv_u,
            inv_x,
            inv_d,
        })
    }

    /// Exact CDF at radius s: cumulative value at the enclosing knot plus a
    /// short quadrature over the partial cell. No interpolation error.
    fn cdf_at_radius(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        self.cdf_at_x(PI * s * s)
    }

    fn cdf_at_x(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = *self.xs.last().unwrap();
        if x >= last {
            return 1.0;
        }
        let h = self.xs[1];
        let i = (x / h) as usize;
        let lo = self.xs[i];
        let base = self.cdf[i];
        if x <= lo {
            return base;
        }
        // GL-8 on [lo, x]
        let w = x - lo;
        let nodes = [
            0.019855071751231884,
            0.10166676129318664,
            0.2372337950418355,
            0.40828267875217505,
            0.5917173212478249,
            0.7627662049581645,
            0.8983332387068134,
            0.9801449282487681,
        ];
        let weights = [
            0.05061426814518813,
            0.11119051722668723,
            0.15685332293894372,
            0.18134189168918097,
            0.18134189168918097,
            0.15685332293894372,
            0.11119051722668723,
            0.05061426814518813,
        ];
        let mut piece = 0.0;
        for (t, ww) in nodes.iter().zip(weights) {
            piece += ww * w * laguerre_fn(self.n, self.a, lo + t * w).powi(2);
        }
        (base + piece).min(1.0)
    }

    /// Inverse CDF in x = pi s^2 via the monotone cubic table; for level 0
    /// components a Newton polish against the analytic gamma form follows.
    fn inverse_x(&self, u: f64) -> f64 {
        let m = self.inv_u.len();
        if u <= 0.0 {
            return 0.0;
        }
        if u >= self.inv_u[m - 1] {
            return self.inv_x[m - 1];
        }
        let mut lo = 0usize;
        let mut hi = m - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.inv_u[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hermite_cubic(
            self.inv_u[lo],
            self.inv_u[hi],
            self.inv_x[lo],
            self.inv_x[hi],
            self.inv_d[lo],
            self.inv_d[hi],
            u,
        )
    }
}

/// Build the radial law for a mode set at a fixed level.
pub fn radial_law(level: usize, indices: &IndexSet) -> Result<RadialLaw> {
    if indices.is_empty() {
        return Err(invalid("radial law needs at least one mode"));
    }
    let tables: Vec<CdfTable> = indices
        .as_slice()
        .par_iter()
        .map(|&j| CdfTable::build(level, j))
        .collect::<Result<_>>()?;
    Ok(RadialLaw {
        level,
        indices: indices.clone(),
        tables,
    })
}

impl RadialLaw {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn indices(&self) -> &IndexSet {
        &self.indices
    }

    pub fn component_count(&self) -> usize {
        self.tables.len()
    }

    /// `P(Y_c <= s)` for component position `c` (position within the index
    /// set, not the mode index).
    pub fn cdf(&self, c: usize, s: f64) -> f64 {
        self.tables[c].cdf_at_radius(s)
    }

    /// `P(Y_c >= s)`.
    pub fn survival(&self, c: usize, s: f64) -> f64 {
        1.0 - self.cdf(c, s)
    }

    /// Inverse transform for one component: monotone cubic table lookup,
    /// Newton-polished against the exact cumulative integral. Level-0
    /// components continue analytically past the table through the gamma
    /// form, so even u in the extreme tail inverts.
    pub fn quantile(&self, c: usize, u: f64) -> f64 {
        let table = &self.tables[c];
        if u <= 0.0 {
            return 0.0;
        }
        let u_top = *table.cdf.last().unwrap();
        let mut x = table.inverse_x(u);
        if self.level == 0 && u >= u_top && u < 1.0 {
            // solve P(j+1, x) = u by Newton beyond the table's reach
            let j = table.a; // level 0: n = 0, a = j
            let ln_norm = ln_gamma(j as f64 + 1.0);
            for _ in 0..12 {
                let f = regularized_lower_gamma(j, x).unwrap_or(u) - u;
                let ln_pdf = j as f64 * x.ln() - x - ln_norm;
                if ln_pdf < -700.0 {
                    break;
                }
                let step = f / ln_pdf.exp();
                let next = x - step;
                if !(next > 0.0) {
                    x /= 2.0;
                    continue;
                }
                x = next;
                if step.abs() < 1e-13 * x.max(1.0) {
                    break;
                }
            }
        } else if u < u_top {
            // cubic start is within ~1e-3; a few steps reach roundoff
            for _ in 0..10 {
                let f = table.cdf_at_x(x) - u;
                let pdf = laguerre_fn(table.n, table.a, x).powi(2);
                if pdf < 1e-280 {
                    break;
                }
                let step = f / pdf;
                let next = x - step;
                if !(next > 0.0) {
                    x /= 2.0;
                    continue;
                }
                x = next;
                if step.abs() < 1e-14 * x.max(1e-6) {
                    break;
                }
            }
        }
        (x / PI).sqrt()
    }

    /// Exact second moment of component `c`: closed form (j + level + 1)/pi
    /// is checked against this in tests.
    pub fn mean_square(&self, c: usize) -> Result<f64> {
        let table = &self.tables[c];
        let x_max = *table.xs.last().unwrap();
        let rule = gauss_legendre(2048, 0.0, x_max)?;
        Ok(rule.integrate(|x| (x / PI) * laguerre_fn(table.n, table.a, x).powi(2)))
    }

    /// One draw of all component radii (independent inverse transforms).
    pub fn sample_radii(&self, stream: &mut Stream) -> Vec<f64> {
        (0..self.tables.len())
            .map(|c| self.quantile(c, stream.next_f64()))
            .collect()
    }
}

/// A batch of independent radii draws.
#[derive(Debug, Clone)]
pub struct RadiiSample {
    pub sample_id: u64,
    pub radii: Vec<f64>,
}

/// Sample the radii law `n_samples` times, one named stream per sample.
pub fn sample_kostlan(
    law: &RadialLaw,
    master_seed: u64,
    n_samples: usize,
) -> Result<Vec<RadiiSample>> {
    if n_samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    Ok((0..n_samples as u64)
        .into_par_iter()
        .map(|sample_id| {
            let mut stream = Stream::labeled(master_seed, &format!("kostlan/{sample_id}"));
            RadiiSample {
                sample_id,
                radii: law.sample_radii(&mut stream),
            }
        })
        .collect())
}

/// Probability that no point of the pure ensemble restricted to modes `J`
/// falls inside the centered disk of radius `radius`: the product of the
/// component survival probabilities.
pub fn hole_probability(level: usize, indices: &IndexSet, radius: f64) -> Result<f64> {
    if indices.is_empty() {
        return Err(invalid("hole probability needs at least one mode"));
    }
    let mut p = 1.0;
    for j in indices.iter() {
        p *= 1.0 - mu_radial(level, j, radius)?;
    }
    Ok(p)
}

// ── goodness of fit ──────────────────────────────────────────────────────

/// One annulus band of the radii histogram test.
#[derive(Debug, Clone)]
pub struct BandReport {
    pub lo: f64,
    pub hi: f64,
    /// expected count per configuration
    pub expected: f64,
    /// observed mean count per configuration
    pub observed: f64,
    /// standard deviation of the observed mean
    pub sigma: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct DistributionReport {
    pub bands: Vec<BandReport>,
    pub chi_square: f64,
    pub dof: usize,
    pub n_samples: usize,
    pub pass: bool,
}

/// 99.9% chi-square quantile by the Wilson-Hilferty transform.
fn chi_square_crit_999(dof: usize) -> f64 {
    let k = dof as f64;
    let z = 3.090_232_306_167_813; // standard normal 99.9% point
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}

/// Compare sampled radii against a radial law over annulus bands
/// `edges[i] <= r < edges[i+1]`.
///
/// Expected counts and variances come from the independent-component
/// structure: each component lands in a band with its own probability, so
/// counts are sums of independent indicators. A band passes when the
/// observed mean sits within 3 sigma of expectation; the whole report
/// passes when every band does and the pooled chi-square stays below its
/// 99.9% point. Needs at least 1000 samples to be meaningful.
pub fn radii_distribution_test(
    samples: &[Vec<f64>],
    law: &RadialLaw,
    edges: &[f64],
) -> Result<DistributionReport> {
    if samples.len() < 1000 {
        return Err(Error::InsufficientSamples {
            got: samples.len(),
            need: 1000,
        });
    }
    if edges.len() < 2 {
        return Err(invalid("need at least two band edges"));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("band edges must be strictly increasing"));
    }
    let n = samples.len();
    let n_bands = edges.len() - 1;
    let mut bands = Vec::with_capacity(n_bands);
    let mut chi_square = 0.0;
    let mut all_pass = true;
    for b in 0..n_bands {
        let (lo, hi) = (edges[b], edges[b + 1]);
        let mut expected = 0.0;
        let mut variance = 0.0;
        for c in 0..law.component_count() {
            let p = (law.cdf(c, hi) - law.cdf(c, lo)).clamp(0.0, 1.0);
            expected += p;
            variance += p * (1.0 - p);
        }
        let total: usize = samples
            .iter()
            .map(|radii| radii.iter().filter(|&&r| r >= lo && r < hi).count())
            .sum();
        let observed = total as f64 / n as f64;
        let sigma = (variance / n as f64).sqrt();
        let dev = (observed - expected).abs();
        let pass = if sigma > 0.0 {
            dev <= 3.0 * sigma
        } else {
            dev == 0.0
        };
        if sigma > 0.0 {
            let z = dev / sigma;
            chi_square += z * z;
        } else if dev > 0.0 {
            chi_square += f64::INFINITY;
        }
        all_pass &= pass;
        bands.push(BandReport {
            lo,
            hi,
            expected,
            observed,
            sigma,
            pass,
        });
    }
    let pass = all_pass && chi_square <= chi_square_crit_999(n_bands);
    Ok(DistributionReport {
        bands,
        chi_square,
        dof: n_bands,
        n_samples: n,
        pass,
    })
}

/// CSV writer: one point per row under provenance metadata.
pub fn write_samples_csv(batch: &SampleBatch, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# kernel={}", batch.kernel_descriptor)?;
    writeln!(out, "# master_seed={}", batch.master_seed)?;
    writeln!(out, "# samples={}", batch.configurations.len())?;
    writeln!(out, "# acceptance_rate={:.6}", batch.acceptance_rate())?;
    writeln!(out, "sample_id,x,xi")?;
    for config in &batch.configurations {
        for p in &config.points {
            writeln!(out, "{},{},{}", config.sample_id, p.x, p.xi)?;
        }
    }
    Ok(())
}

/// CSV writer for a distribution report.
pub fn write_distribution_report_csv(
    report: &DistributionReport,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(out, "# n_samples={}", report.n_samples)?;
    writeln!(out, "# chi_square={:.6}", report.chi_square)?;
    writeln!(out, "# dof={}", report.dof)?;
    writeln!(out, "# pass={}", report.pass)?;
    writeln!(out, "annulus_lo,annulus_hi,expected,observed,sigma,pass")?;
    for b in &report.bands {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            b.lo, b.hi, b.expected, b.observed, b.sigma, b.pass
        )?;
    }
    Ok(())
}

/// Convenience: the radii vectors of a batch of configurations.
pub fn batch_radii(batch: &SampleBatch) -> Vec<Vec<f64>> {
    batch.configurations.iter().map(|c| c.radii()).collect()
}

/// Sanity guard shared by tests and the command layer: the window of an
/// eigenfunction kernel must be recoverable. (Pure kernels have no window.)
pub fn kernel_window(kernel: &ProjectionKernel) -> Option<&WindowSpec> {
    match kernel {
        ProjectionKernel::WindowDomain { window, .. } => Some(window),
        ProjectionKernel::PurePoly { .. } => None,
    }
}
