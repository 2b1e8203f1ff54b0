//! Rank-N projection kernels and the planar determinantal ensembles they
//! induce.
//!
//! Two kernel families share one interface: eigenfunction kernels of an
//! assembled localization operator (top eigenfunctions over a domain), and
//! closed-form kernels spanned by the first modes of a fixed polyanalytic
//! level (level 0 over a centered disk is the finite Ginibre ensemble). Both
//! expose an orthonormal feature map; intensities, L1 comparisons against
//! the flat indicator, and the exact samplers all build on it.

use crate::domains::Domain;
use crate::phasespace::{stft_hermite, stft_window, PhasePoint, WindowSpec};
use crate::toeplitz::{assemble, eigendecompose, mu_radial, AssemblyOptions, Spectrum, ToeplitzMatrix};
use crate::{invalid, Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Strictly increasing list of indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Sorts the input; duplicate entries are an error.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("index set contains duplicates"));
        }
        Ok(IndexSet(indices))
    }

    /// The contiguous block {0, .., n-1}.
    pub fn first(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Size of the symmetric difference.
    pub fn symdiff_size(&self, other: &IndexSet) -> usize {
        let in_both = self.0.iter().filter(|&&i| other.contains(i)).count();
        self.len() + other.len() - 2 * in_both
    }
}

/// Projection kernel defining a determinantal ensemble on the plane.
#[derive(Debug, Clone)]
pub enum ProjectionKernel {
    /// Span of selected eigenfunctions (slots into the sorted spectrum) of
    /// an assembled localization operator.
    WindowDomain {
        window: WindowSpec,
        spectrum: Spectrum,
        positions: IndexSet,
    },
    /// Span of the closed-form modes {j in indices} at a fixed level.
    PurePoly { level: usize, indices: IndexSet },
}

impl ProjectionKernel {
    pub fn rank(&self) -> usize {
        match self {
            ProjectionKernel::WindowDomain { positions, .. } => positions.len(),
            ProjectionKernel::PurePoly { indices, .. } => indices.len(),
        }
    }

    /// Orthonormal feature map: `K(p, q) = sum_i phi_i(p) conj(phi_i(q))`
    /// with `integral phi_i conj(phi_k) = delta_{ik}` over the plane.
    pub fn features(&self, p: PhasePoint) -> Vec<Complex64> {
        match self {
            ProjectionKernel::WindowDomain {
                window,
                spectrum,
                positions,
            } => {
                let m = spectrum.eigenvalues.len();
                let base: Vec<Complex64> =
                    (0..m).map(|k| stft_window(window, k, p)).collect();
                positions
                    .iter()
                    .map(|slot| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (k, b) in base.iter().enumerate() {
                            let c = spectrum.eigenvectors[(k, slot)];
                            if c.norm() > 0.0 {
                                acc += c * b;
                            }
                        }
                        acc
                    })
                    .collect()
            }
            ProjectionKernel::PurePoly { level, indices } => indices
                .iter()
                .map(|j| stft_hermite(j, *level, p))
                .collect(),
        }
    }

    pub fn value(&self, p: PhasePoint, q: PhasePoint) -> Complex64 {
        let fp = self.features(p);
        let fq = self.features(q);
        fp.iter()
            .zip(&fq)
            .map(|(a, b)| a * b.conj())
            .fold(Complex64::new(0.0, 0.0), |s, v| s + v)
    }

    /// One-point intensity `K(p, p)`, always within [0, 1] for these
    /// projection kernels (they sit under a reproducing kernel with unit
    /// diagonal).
    pub fn intensity(&self, p: PhasePoint) -> f64 {
        let rho: f64 = self.features(p).iter().map(|v| v.norm_sqr()).sum();
        debug_assert!(rho < 1.0 + 1e-8, "intensity {rho} above 1");
        rho.clamp(0.0, 1.0)
    }

    /// Short text form for output headers and sample provenance.
    pub fn descriptor(&self) -> String {
        match self {
            ProjectionKernel::WindowDomain {
                window,
                spectrum,
                positions,
            } => format!(
                "wh(window={};domain={};rank={})",
                window.label(),
                spectrum.domain_descriptor,
                positions.len()
            ),
            ProjectionKernel::PurePoly { level, indices } => {
                let contiguous = indices
                    .iter()
                    .enumerate()
                    .all(|(pos, j)| pos == j);
                if contiguous {
                    format!("poly(level={};n={})", level, indices.len())
                } else {
                    format!("poly(level={};indices={:?})", level, indices.as_slice())
                }
            }
        }
    }
}

/// Eigenfunction kernel of the localization operator: assembles, solves,
/// and keeps the top `n_omega` eigenfunction slots.
///
/// Fails if the spectrum cannot support the rank (eigenvalue at the cut
/// below 1e-9); warns into the spectrum when the cut is ambiguous (gap
/// below 1e-12).
pub fn finite_wh_kernel(
    window: &WindowSpec,
    domain: &Domain,
    m: usize,
    opts: &AssemblyOptions,
) -> Result<ProjectionKernel> {
    let t = assemble(window, domain, m, opts)?;
    let mut spectrum = eigendecompose(&t)?;
    spectrum.warnings.extend(t.warnings.iter().cloned());
    let n = domain.n_omega();
    if n == 0 {
        return Err(invalid("domain measure too small: expected count is zero"));
    }
    if spectrum.eigenvalues[n - 1] < 1e-9 {
        return Err(Error::Numerical(format!(
            "rank deficient: eigenvalue {} at cut position {} cannot span rank {n}",
            spectrum.eigenvalues[n - 1],
            n - 1
        )));
    }
    if n < m {
        let gap = spectrum.eigenvalues[n - 1] - spectrum.eigenvalues[n];
        if gap < 1e-12 {
            spectrum.warnings.push(format!(
                "selection ambiguous: eigenvalue gap {gap:.3e} at the rank-{n} cut"
            ));
        }
    }
    Ok(ProjectionKernel::WindowDomain {
        window: window.clone(),
        spectrum,
        positions: IndexSet::first(n),
    })
}

/// Eigenfunction kernel with explicit slot choice (slots index the sorted
/// spectrum). Same rank-support check as [`finite_wh_kernel`].
pub fn wh_kernel_from_parts(
    window: &WindowSpec,
    spectrum: Spectrum,
    positions: IndexSet,
) -> Result<ProjectionKernel> {
    let m = spectrum.eigenvalues.len();
    for slot in positions.iter() {
        if slot >= m {
            return Err(invalid(format!("slot {slot} out of range (m = {m})")));
        }
        if spectrum.eigenvalues[slot] < 1e-9 {
            return Err(Error::Numerical(format!(
                "rank deficient: slot {slot} carries eigenvalue {}",
                spectrum.eigenvalues[slot]
            )));
        }
    }
    Ok(ProjectionKernel::WindowDomain {
        window: window.clone(),
        spectrum,
        positions,
    })
}

/// Closed-form kernel of the first `n` modes at a polyanalytic level; never
/// touches assembly. Level 0 is the finite Ginibre ensemble.
pub fn pure_poly_kernel(level: usize, n: usize) -> Result<ProjectionKernel> {
    if n == 0 {
        return Err(invalid("pure kernel needs at least one mode"));
    }
    Ok(ProjectionKernel::PurePoly {
        level,
        indices: IndexSet::first(n),
    })
}

/// Closed-form kernel on an arbitrary mode set.
pub fn pure_poly_kernel_with_indices(level: usize, indices: IndexSet) -> Result<ProjectionKernel> {
    if indices.is_empty() {
        return Err(invalid("pure kernel needs at least one mode"));
    }
    Ok(ProjectionKernel::PurePoly { level, indices })
}

/// L1 distance between the ensemble intensity and the domain indicator,
/// from spectral data alone:
/// `#I - |Omega| + 2 (sum_{j<M, j not in I} lambda_j + tail_mass)`.
/// `selected` are slots into the sorted spectrum.
pub fn l1_deviation_spectral(
    t: &ToeplitzMatrix,
    spectrum: &Spectrum,
    selected: &IndexSet,
) -> Result<f64> {
    let m = spectrum.eigenvalues.len();
    let mut unselected_sum = 0.0;
    for slot in 0..m {
        if !selected.contains(slot) {
            unselected_sum += spectrum.eigenvalues[slot];
        }
    }
    for slot in selected.iter() {
        if slot >= m {
            return Err(invalid(format!("slot {slot} out of range (m = {m})")));
        }
    }
    let measure = t.trace + t.tail_mass;
    Ok(selected.len() as f64 - measure + 2.0 * (unselected_sum + t.tail_mass))
}

/// Same distance for a pure kernel over a centered disk: closed form
/// `#I + pi R^2 - 2 sum_{j in I} mu_j`.
pub fn l1_deviation_pure(level: usize, indices: &IndexSet, radius: f64) -> Result<f64> {
    let mut mu_sum = 0.0;
    for j in indices.iter() {
        mu_sum += mu_radial(level, j, radius)?;
    }
    Ok(indices.len() as f64 + PI * radius * radius - 2.0 * mu_sum)
}

/// Honest two-dimensional evaluation of the same L1 distance:
/// `integral_Omega (1 - rho) + integral_complement rho`, the complement
/// truncated at `reach` (a radius or half-width safely past the kernel's
/// numerical support). Supported for disks, annuli and rectangles.
pub fn l1_deviation_quadrature(
    kernel: &ProjectionKernel,
    domain: &Domain,
    reach: f64,
    n1: usize,
    n2: usize,
) -> Result<f64> {
    let integrate_rho = |d: &Domain, sign_one: bool| -> Result<f64> {
        let q = d.quadrature(n1, n2)?;
        let partials: Vec<f64> = q
            .nodes
            .par_iter()
            .zip(q.weights.par_iter())
            .map(|(&p, &w)| {
                let rho = kernel.intensity(p);
                if sign_one {
                    w * (1.0 - rho)
                } else {
                    w * rho
                }
            })
            .collect();
        Ok(partials.iter().sum())
    };

    let inside = integrate_rho(domain, true)?;
    let complement: Vec<Domain> = match domain {
        Domain::Disk { radius } => {
            if reach <= *radius {
                return Err(invalid("reach must exceed the disk radius"));
            }
            vec![Domain::annulus(*radius, reach)?]
        }
        Domain::Annulus { inner, outer } => {
            if reach <= *outer {
                return Err(invalid("reach must exceed the outer radius"));
            }
            let mut parts = vec![Domain::annulus(*outer, reach)?];
            if *inner > 0.0 {
                parts.push(Domain::disk(*inner)?);
            }
            parts
        }
        Domain::Rect { x0, x1, xi0, xi1 } => {
            let l = reach;
            if -l >= *x0 || l <= *x1 || -l >= *xi0 || l <= *xi1 {
                return Err(invalid("reach box must strictly contain the rectangle"));
            }
            vec![
                Domain::rect(-l, *x0, -l, l)?,
                Domain::rect(*x1, l, -l, l)?,
                Domain::rect(*x0, *x1, -l, *xi0)?,
                Domain::rect(*x0, *x1, *xi1, l)?,
            ]
        }
        Domain::Polygon { .. } => {
            return Err(invalid(
                "complement integration not supported for polygons",
            ))
        }
    };
    let mut outside = 0.0;
    for piece in &complement {
        outside += integrate_rho(piece, false)?;
    }
    Ok(inside + outside)
}

/// Mode selection for the pure ensemble at matched scale: the `n` largest
/// disk eigenvalues at area `n`, ties broken toward the smaller index.
/// Returns the chosen mode indices and a warning when the cut is ambiguous
/// (gap below 1e-12, which genuinely occurs at level 1 where adjacent
/// eigenvalue curves cross exactly at integer area).
pub fn poly_index_set(level: usize, n: usize) -> Result<(IndexSet, Vec<String>)> {
    if n == 0 {
        return Err(invalid("mode selection needs n >= 1"));
    }
    let m = (2 * n).max(n + 64);
    let radius = (n as f64 / PI).sqrt();
    let mus: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| mu_radial(level, j, radius))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        mus[b]
            .partial_cmp(&mus[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    // runs closer than 1e-12 are genuine ties up to quadrature roundoff
    // (level 1 has an exact triple crossing at integer area); order them by
    // ascending index so the tie-break is stable, not roundoff-driven
    let mut i = 0;
    while i < m {
        let mut j = i + 1;
        while j < m && (mus[order[j - 1]] - mus[order[j]]).abs() <= 1e-12 {
            j += 1;
        }
        if j - i > 1 {
            order[i..j].sort_unstable();
        }
        i = j;
    }
    let mut warnings = Vec::new();
    let gap = mus[order[n - 1]] - mus[order[n]];
    if gap < 1e-12 {
        warnings.push(format!(
            "selection ambiguous: eigenvalue gap {gap:.3e} between ranks {} and {n}",
            n - 1
        ));
    }
    let chosen = IndexSet::new(order[..n].to_vec())?;
    Ok((chosen, warnings))
}

/// Symmetric difference between the selected mode set at level `level`,
/// scale `n`, and the contiguous block {0, .., n-1}. Zero at level 0.
pub fn trace_distance_poly(level: usize, n: usize) -> Result<usize> {
    let (chosen, _) = poly_index_set(level, n)?;
    Ok(chosen.symdiff_size(&IndexSet::first(n)))
}

/// CSV writer: intensity sampled on a uniform grid, `x,xi,rho` rows.
pub fn write_intensity_csv(
    kernel: &ProjectionKernel,
    x_range: (f64, f64),
    xi_range: (f64, f64),
    nx: usize,
    nxi: usize,
    out: &mut dyn Write,
) -> Result<()> {
    if nx < 2 || nxi < 2 {
        return Err(invalid("intensity grid needs at least 2 points per axis"));
    }
    if !(x_range.0 < x_range.1) || !(xi_range.0 < xi_range.1) {
        return Err(invalid("intensity grid ranges must be increasing"));
    }
    writeln!(out, "# kernel={}", kernel.descriptor())?;
    writeln!(out, "# grid={}x{}", nx, nxi)?;
    writeln!(out, "x,xi,rho")?;
    let rows: Vec<String> = (0..nx)
        .into_par_iter()
        .map(|a| {
            let x = x_range.0 + (x_range.1 - x_range.0) * a as f64 / (nx - 1) as f64;
            let mut chunk = String::new();
            for b in 0..nxi {
                let xi =
                    xi_range.0 + (xi_range.1 - xi_range.0) * b as f64 / (nxi - 1) as f64;
                let rho = kernel.intensity(PhasePoint::new(x, xi));
                chunk.push_str(&format!("{x},{xi},{rho}\n"));
            }
            chunk
        })
        .collect();
    for chunk in rows {
        out.write_all(chunk.as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::regularized_lower_gamma;
    use approx::assert_abs_diff_eq;

    #[test]
    fn index_set_normalizes_and_rejects_duplicates() {
        let s = IndexSet::new(vec![4, 1, 3]).unwrap();
        assert_eq!(s.as_slice(), &[1, 3, 4]);
        assert!(IndexSet::new(vec![2, 2]).is_err());
        let t = IndexSet::first(4);
        assert_eq!(s.symdiff_size(&t), 3); // {0, 2} vs {4} -> 3
        assert_eq!(t.symdiff_size(&t), 0);
    }

    #[test]
    fn single_mode_ginibre_intensity_is_gaussian() {
        let k = pure_poly_kernel(0, 1).unwrap();
        for (x, xi) in [(0.0, 0.0), (0.5, -0.2), (1.5, 1.0)] {
            let p = PhasePoint::new(x, xi);
            let expect = (-PI * (x * x + xi * xi)).exp();
            assert_abs_diff_eq!(k.intensity(p), expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn pure_kernel_mass_equals_rank() {
        let k = pure_poly_kernel(1, 3).unwrap();
        let radial = crate::specfun::gauss_legendre(220, 0.0, 6.0).unwrap();
        let n_ang = 96;
        let mut total = 0.0;
        for (&s, &w) in radial.nodes().iter().zip(radial.weights()) {
            for q in 0..n_ang {
                let th = 2.0 * PI * q as f64 / n_ang as f64;
                total += w * s * (2.0 * PI / n_ang as f64)
                    * k.intensity(PhasePoint::new(s * th.cos(), s * th.sin()));
            }
        }
        assert_abs_diff_eq!(total, 3.0, epsilon = 1e-7);
    }

    #[test]
    fn kernel_is_hermitian_and_dominated_by_diagonal() {
        let k = pure_poly_kernel(2, 4).unwrap();
        let p = PhasePoint::new(0.7, -0.1);
        let q = PhasePoint::new(-0.3, 0.9);
        let kpq = k.value(p, q);
        let kqp = k.value(q, p);
        assert_abs_diff_eq!((kpq - kqp.conj()).norm(), 0.0, epsilon = 1e-13);
        assert!(kpq.norm_sqr() <= k.intensity(p) * k.intensity(q) + 1e-12);
    }

    #[test]
    fn eigenfunction_kernel_of_gaussian_disk_matches_pure_kernel() {
        // h_0 over a centered disk selects exactly the first modes, so the
        // two kernel families coincide pointwise.
        let w = WindowSpec::hermite(0);
        let d = Domain::disk((4.0 / PI).sqrt()).unwrap();
        let wh = finite_wh_kernel(&w, &d, 16, &AssemblyOptions::default()).unwrap();
        let pure = pure_poly_kernel(0, 4).unwrap();
        assert_eq!(wh.rank(), 4);
        for (x, xi) in [(0.0, 0.0), (0.4, 0.8), (-1.2, 0.3)] {
            let p = PhasePoint::new(x, xi);
            let q = PhasePoint::new(xi, -x);
            assert!(
                (wh.value(p, q) - pure.value(p, q)).norm() < 1e-9,
                "kernels differ at ({x},{xi})"
            );
        }
        let rho0 = wh.intensity(PhasePoint::new(0.0, 0.0));
        assert_abs_diff_eq!(rho0, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gauge_turns_gaussian_kernel_into_ginibre_form() {
        let k = pure_poly_kernel(0, 4).unwrap();
        let p = PhasePoint::new(0.6, -0.4);
        let q = PhasePoint::new(-0.1, 0.8);
        let pc = PhasePoint::new(p.x, -p.xi);
        let qc = PhasePoint::new(q.x, -q.xi);
        let gauged = crate::phasespace::gauge_renormalize(k.value(pc, qc), p, q);
        let zp = p.to_complex();
        let zq = q.to_complex();
        let mut series = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for j in 0..4 {
            if j > 0 {
                term *= PI * zp * zq.conj() / j as f64;
            }
            series += term;
        }
        let expect = series * (-PI * (zp.norm_sqr() + zq.norm_sqr()) / 2.0).exp();
        assert_abs_diff_eq!((gauged - expect).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rank_deficient_slots_are_rejected() {
        let w = WindowSpec::hermite(0);
        let d = Domain::disk((4.0 / PI).sqrt()).unwrap();
        let t = assemble(&w, &d, 30, &AssemblyOptions::default()).unwrap();
        let s = eigendecompose(&t).unwrap();
        // slot 29 carries P(30, 4) which is numerically zero
        assert!(wh_kernel_from_parts(&w, s.clone(), IndexSet::new(vec![29]).unwrap()).is_err());
        assert!(wh_kernel_from_parts(&w, s, IndexSet::new(vec![40]).unwrap()).is_err());
    }

    #[test]
    fn spectral_and_quadrature_l1_agree_on_small_disk() {
        let w = WindowSpec::hermite(0);
        let d = Domain::disk((4.0 / PI).sqrt()).unwrap();
        let t = assemble(&w, &d, 24, &AssemblyOptions::default()).unwrap();
        let s = eigendecompose(&t).unwrap();
        let sel = IndexSet::first(4);
        let spectral = l1_deviation_spectral(&t, &s, &sel).unwrap();
        // exact closed form for this configuration
        let mut exact = 0.0;
        for j in 0..4 {
            exact += 2.0 * (1.0 - regularized_lower_gamma(j, 4.0).unwrap());
        }
        assert_abs_diff_eq!(spectral, exact, epsilon = 1e-9);

        let kernel = pure_poly_kernel(0, 4).unwrap();
        let quad = l1_deviation_quadrature(&kernel, &d, 5.5, 180, 128).unwrap();
        assert_abs_diff_eq!(quad, exact, epsilon = 1e-7);

        let pure = l1_deviation_pure(0, &sel, (4.0 / PI).sqrt()).unwrap();
        assert_abs_diff_eq!(pure, exact, epsilon = 1e-10);
    }

    #[test]
    fn mode_selection_at_level_zero_is_contiguous() {
        for n in [1usize, 5, 25] {
            let (set, warnings) = poly_index_set(0, n).unwrap();
            assert_eq!(set, IndexSet::first(n));
            assert!(warnings.is_empty(), "unexpected warning at n={n}");
            assert_eq!(trace_distance_poly(0, n).unwrap(), 0);
        }
    }

    #[test]
    fn mode_selection_at_level_one_hits_exact_crossing() {
        // At area 1 the two leading level-1 eigenvalue curves are exactly
        // equal; the deterministic tie rule keeps mode 0 and the ambiguity
        // warning fires.
        let (set, warnings) = poly_index_set(1, 1).unwrap();
        assert_eq!(set, IndexSet::first(1));
        assert!(!warnings.is_empty(), "tie warning expected");
        assert_eq!(trace_distance_poly(1, 1).unwrap(), 0);
    }

    #[test]
    fn mode_selection_at_level_two_scale_one_prefers_mode_one() {
        // oracle: tools/reference_values.py; the gap is genuine (~6e-2)
        let (set, warnings) = poly_index_set(2, 1).unwrap();
        assert_eq!(set.as_slice(), &[1]);
        assert!(warnings.is_empty());
        assert_eq!(trace_distance_poly(2, 1).unwrap(), 2);
    }

    #[test]
    fn intensity_grid_csv_shape() {
        let k = pure_poly_kernel(0, 1).unwrap();
        let mut buf = Vec::new();
        write_intensity_csv(&k, (-1.0, 1.0), (-1.0, 1.0), 3, 3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# kernel=poly(level=0;n=1)"));
        assert_eq!(lines[2], "x,xi,rho");
        assert_eq!(lines.len(), 3 + 9);
        assert!(lines[3].starts_with("-1,-1,"));
        let val: f64 = lines[7].split(',').nth(2).unwrap().parse().unwrap();
        assert_abs_diff_eq!(val, 1.0, epsilon = 1e-14); // center of grid, rho(0,0)=1
    }
}
