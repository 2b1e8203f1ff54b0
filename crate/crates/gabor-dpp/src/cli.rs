//! Command-line surface: one subcommand per capability, reproducible
//! output.
//!
//! Every table goes out as CSV under `# key=value` headers that echo the
//! configuration, so a file can be regenerated byte-for-byte from its own
//! header block. Exit codes: 0 success, 1 runtime failure, 2 usage error,
//! 3 warnings escalated by --check, 4 failed cross-check under --check.

use crate::domains::Domain;
use crate::ensembles::{
    poly_index_set, pure_poly_kernel, write_intensity_csv, IndexSet, ProjectionKernel,
};
use crate::phasespace::WindowSpec;
use crate::sampling::{
    batch_radii, hole_probability, radial_law, radii_distribution_test, sample_dpp,
    sample_kostlan, write_distribution_report_csv, write_samples_csv, RadialLaw,
};
use crate::toeplitz::{
    assemble, default_quad_orders, double_orthogonality_check, eigendecompose, mu_radial,
    weyl_count, write_eigenvectors_csv, write_spectrum_csv, AssemblyOptions,
};
use crate::{invalid, Error, Result};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "gabor-dpp",
    version,
    about = "Planar determinantal ensembles from time-frequency localization"
)]
pub struct Cli {
    /// Escalate warnings (exit 3) and fail on broken cross-checks (exit 4)
    #[arg(long, global = true)]
    pub check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Assemble a localization operator and write its eigenvalue staircase
    Spectrum(SpectrumArgs),
    /// Evaluate an ensemble's intensity on a uniform grid
    Intensity(IntensityArgs),
    /// Compare eigenbasis mode selections against contiguous pure levels
    Compare(CompareArgs),
    /// Draw point configurations from a projection ensemble
    Sample(SampleArgs),
    /// Draw independent radii from the matching radial law
    Kostlan(KostlanArgs),
    /// Count near-1 eigenvalues across dilated disks
    Weyl(WeylArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Window: hermite:<r> or file:<path> (one `r real imag` line each)
    #[arg(long, default_value = "hermite:0")]
    window: String,
    /// Domain: disk:R | annulus:r0,R | rect:x0,x1,xi0,xi1 | poly:@file
    #[arg(long)]
    domain: String,
    /// Galerkin dimension (Hermite modes); default 2*n_omega + 48
    #[arg(long)]
    basis: Option<usize>,
    /// Quadrature orders n1,n2 (radial,angular on circular domains)
    #[arg(long)]
    quad: Option<String>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write eigenvector coefficients for the leading n_omega slots
    #[arg(long)]
    eigenvectors: Option<PathBuf>,
    /// Staircase plot
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IntensityArgs {
    #[command(flatten)]
    kernel: KernelSelect,
    /// Grid resolution nx,nxi
    #[arg(long, default_value = "121,121")]
    grid: String,
    /// Horizontal range lo,hi (defaults to the domain box plus margin)
    #[arg(long)]
    xrange: Option<String>,
    /// Vertical range lo,hi
    #[arg(long)]
    xirange: Option<String>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Pure levels to sweep
    #[arg(long, default_value = "0,1,2", value_delimiter = ',')]
    levels: Vec<usize>,
    /// Ensemble sizes to sweep
    #[arg(long, default_value = "25,100,400", value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    kernel: KernelSelect,
    /// Number of configurations
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Master seed; per-sample streams derive from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scatter plot of the first configuration
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KostlanArgs {
    /// Pure level
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Number of modes (the first n)
    #[arg(long)]
    modes: usize,
    /// Number of radii draws
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radii table output (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Annulus band count for the distribution report (0 disables)
    #[arg(long, default_value_t = 8)]
    bands: usize,
    /// Distribution report output
    #[arg(long)]
    report: Option<PathBuf>,
    /// Disk radii for hole probabilities (analytic and empirical)
    #[arg(long = "hole")]
    holes: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    /// Pure Hermite window index
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Disk areas to sweep
    #[arg(long, default_value = "25,100,400", value_delimiter = ',')]
    areas: Vec<f64>,
    /// Count eigenvalues above 1 - delta
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Kernel choice shared by `intensity` and `sample`: either a closed-form
/// pure ensemble or an assembled eigenfunction ensemble.
#[derive(Args, Debug)]
struct KernelSelect {
    /// Closed-form ensemble "level,n" instead of window/domain assembly
    #[arg(long, conflicts_with_all = ["window", "domain", "basis", "quad"])]
    pure: Option<String>,
    /// Window: hermite:<r> or file:<path>
    #[arg(long, default_value = "hermite:0")]
    window: String,
    /// Domain descriptor
    #[arg(long)]
    domain: Option<String>,
    /// Galerkin dimension; default 2*n_omega + 48
    #[arg(long)]
    basis: Option<usize>,
    /// Quadrature orders n1,n2
    #[arg(long)]
    quad: Option<String>,
}

struct BuiltKernel {
    kernel: ProjectionKernel,
    domain: Option<Domain>,
    headers: Vec<(&'static str, String)>,
    warnings: Vec<String>,
}

impl KernelSelect {
    fn build(&self) -> Result<BuiltKernel> {
        if let Some(spec) = &self.pure {
            let (level, n) = parse_usize_pair(spec, "--pure")?;
            return Ok(BuiltKernel {
                kernel: pure_poly_kernel(level, n)?,
                domain: None,
                headers: vec![("pure", spec.clone())],
                warnings: Vec::new(),
            });
        }
        let desc = self
            .domain
            .as_ref()
            .ok_or_else(|| invalid("either --pure or --domain is required"))?;
        let window = parse_window(&self.window)?;
        let domain = Domain::parse(desc)?;
        let m = self.basis.unwrap_or(2 * domain.n_omega() + 48);
        let quad = self
            .quad
            .as_deref()
            .map(|q| parse_usize_pair(q, "--quad"))
            .transpose()?;
        let opts = AssemblyOptions {
            quad,
            force_dense: false,
        };
        let kernel = crate::ensembles::finite_wh_kernel(&window, &domain, m, &opts)?;
        let warnings = match &kernel {
            ProjectionKernel::WindowDomain { spectrum, .. } => spectrum.warnings.clone(),
            ProjectionKernel::PurePoly { .. } => Vec::new(),
        };
        let (d1, d2) = quad.unwrap_or_else(|| default_quad_orders(&domain, m));
        Ok(BuiltKernel {
            kernel,
            domain: Some(domain),
            headers: vec![
                ("window", self.window.clone()),
                ("domain", desc.clone()),
                ("basis", m.to_string()),
                ("quad", format!("{d1},{d2}")),
            ],
            warnings,
        })
    }
}

#[derive(Default)]
struct Outcome {
    warnings: Vec<String>,
    failures: Vec<String>,
}

/// Parse arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let check = cli.check;
    let outcome = match cli.command {
        Command::Spectrum(args) => run_spectrum(args, check),
        Command::Intensity(args) => run_intensity(args),
        Command::Compare(args) => run_compare(args),
        Command::Sample(args) => run_sample(args),
        Command::Kostlan(args) => run_kostlan(args),
        Command::Weyl(args) => run_weyl(args),
    };
    match outcome {
        Ok(o) => {
            for w in &o.warnings {
                eprintln!("warning: {w}");
            }
            for f in &o.failures {
                eprintln!("check failed: {f}");
            }
            if check && !o.failures.is_empty() {
                4
            } else if check && !o.warnings.is_empty() {
                3
            } else {
                0
            }
        }
        Err(Error::InvalidArgument(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Error::DegenerateDomain(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn parse_window(s: &str) -> Result<WindowSpec> {
    if let Some(rest) = s.strip_prefix("hermite:") {
        let r: usize = rest
            .parse()
            .map_err(|_| invalid(format!("bad hermite index in window {s:?}")))?;
        Ok(WindowSpec::hermite(r))
    } else if let Some(path) = s.strip_prefix("file:") {
        WindowSpec::from_file(path)
    } else {
        Err(invalid(format!(
            "window must be hermite:<r> or file:<path>, got {s:?}"
        )))
    }
}

fn parse_usize_pair(s: &str, what: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| invalid(format!("{what} takes two comma-separated integers, got {s:?}")))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what}: bad integer {a:?}")))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what}: bad integer {b:?}")))?;
    Ok((a, b))
}

fn parse_f64_pair(s: &str, what: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| invalid(format!("{what} takes two comma-separated numbers, got {s:?}")))?;
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what}: bad number {a:?}")))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what}: bad number {b:?}")))?;
    Ok((a, b))
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        None => Box::new(std::io::stdout().lock()),
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
    })
}

fn write_preamble(
    out: &mut dyn Write,
    command: &str,
    pairs: &[(&str, String)],
) -> std::io::Result<()> {
    writeln!(out, "# tool=gabor-dpp")?;
    writeln!(out, "# version={}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# command={command}")?;
    for (k, v) in pairs {
        writeln!(out, "# {k}={v}")?;
    }
    Ok(())
}

fn run_spectrum(args: SpectrumArgs, check: bool) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let window = parse_window(&args.window)?;
    let domain = Domain::parse(&args.domain)?;
    let m = args.basis.unwrap_or(2 * domain.n_omega() + 48);
    let quad = args
        .quad
        .as_deref()
        .map(|q| parse_usize_pair(q, "--quad"))
        .transpose()?;
    let opts = AssemblyOptions {
        quad,
        force_dense: false,
    };
    let t = assemble(&window, &domain, m, &opts)?;
    let spectrum = eigendecompose(&t)?;
    outcome.warnings.extend(t.warnings.iter().cloned());
    outcome.warnings.extend(spectrum.warnings.iter().cloned());

    let n_omega = domain.n_omega();
    let plateau = weyl_count(&spectrum.eigenvalues, 0.5)?;
    let (d1, d2) = quad.unwrap_or_else(|| default_quad_orders(&domain, m));
    let mut out = open_out(&args.out)?;
    write_preamble(
        &mut *out,
        "spectrum",
        &[
            ("basis", m.to_string()),
            ("quad", format!("{d1},{d2}")),
            ("trace", t.trace.to_string()),
            ("tail_mass", t.tail_mass.to_string()),
            ("n_omega", n_omega.to_string()),
            ("plateau_half", plateau.to_string()),
        ],
    )?;
    write_spectrum_csv(&spectrum, &mut *out)?;
    out.flush()?;

    if let Some(path) = &args.eigenvectors {
        let slots: Vec<usize> = (0..n_omega.min(m)).collect();
        let mut vout = open_out(&Some(path.clone()))?;
        write_preamble(&mut *vout, "spectrum", &[("basis", m.to_string())])?;
        write_eigenvectors_csv(&spectrum, &slots, &mut *vout)?;
        vout.flush()?;
    }
    if let Some(path) = &args.svg {
        svg_staircase(&spectrum.eigenvalues, Some(0.5), path)?;
    }
    eprintln!(
        "spectrum: m={m} trace={:.6} tail={:.3e} plateau(>1/2)={plateau} expected={n_omega}",
        t.trace, t.tail_mass
    );

    if check {
        let probe = n_omega.min(3).max(1).min(m);
        let slots: Vec<usize> = (0..probe).collect();
        let report = double_orthogonality_check(
            &window,
            &domain,
            &spectrum,
            &slots,
            Some((2 * m + 33, 2 * m + 29)),
        )?;
        if report.max_diag_deviation > 1e-6 || report.max_offdiag > 1e-6 {
            outcome.failures.push(format!(
                "restricted Gram drift: diag {:.3e}, offdiag {:.3e}",
                report.max_diag_deviation, report.max_offdiag
            ));
        }
    }
    Ok(outcome)
}

fn run_intensity(args: IntensityArgs) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let built = args.kernel.build()?;
    outcome.warnings.extend(built.warnings.iter().cloned());
    let (nx, nxi) = parse_usize_pair(&args.grid, "--grid")?;
    let (xr, xir) = match (&args.xrange, &args.xirange) {
        (Some(a), Some(b)) => (
            parse_f64_pair(a, "--xrange")?,
            parse_f64_pair(b, "--xirange")?,
        ),
        (None, None) => default_ranges(&built),
        (Some(a), None) => {
            let r = parse_f64_pair(a, "--xrange")?;
            (r, r)
        }
        (None, Some(b)) => {
            let r = parse_f64_pair(b, "--xirange")?;
            (r, r)
        }
    };
    let mut out = open_out(&args.out)?;
    let mut pairs = built.headers.clone();
    pairs.push(("xrange", format!("{},{}", xr.0, xr.1)));
    pairs.push(("xirange", format!("{},{}", xir.0, xir.1)));
    write_preamble(&mut *out, "intensity", &pairs)?;
    write_intensity_csv(&built.kernel, xr, xir, nx, nxi, &mut *out)?;
    out.flush()?;
    eprintln!(
        "intensity: kernel={} grid={nx}x{nxi}",
        built.kernel.descriptor()
    );
    Ok(outcome)
}

fn default_ranges(built: &BuiltKernel) -> ((f64, f64), (f64, f64)) {
    match (&built.domain, &built.kernel) {
        (Some(d), _) => {
            let ((x0, x1), (xi0, xi1)) = d.bounding_box();
            let pad = 1.5;
            ((x0 - pad, x1 + pad), (xi0 - pad, xi1 + pad))
        }
        (None, ProjectionKernel::PurePoly { level, indices }) => {
            let top = indices.as_slice().last().copied().unwrap_or(0) + level;
            let r = ((top + 1) as f64 / std::f64::consts::PI).sqrt() + 2.0;
            ((-r, r), (-r, r))
        }
        (None, ProjectionKernel::WindowDomain { .. }) => ((-4.0, 4.0), (-4.0, 4.0)),
    }
}

fn run_compare(args: CompareArgs) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    if args.levels.is_empty() || args.sizes.is_empty() {
        return Err(invalid("compare needs at least one level and one size"));
    }
    let mut out = open_out(&args.out)?;
    write_preamble(
        &mut *out,
        "compare",
        &[
            (
                "levels",
                args.levels
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            (
                "sizes",
                args.sizes
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ],
    )?;
    writeln!(out, "level,n,symdiff,sqrt_n,ratio")?;
    for &level in &args.levels {
        for &n in &args.sizes {
            let (chosen, warns) = poly_index_set(level, n)?;
            outcome.warnings.extend(warns);
            let symdiff = chosen.symdiff_size(&IndexSet::first(n));
            let sqrt_n = (n as f64).sqrt();
            let ratio = symdiff as f64 / sqrt_n;
            writeln!(out, "{level},{n},{symdiff},{sqrt_n},{ratio}")?;
            if level == 0 && symdiff != 0 {
                outcome.failures.push(format!(
                    "level 0 selection must be contiguous, got symdiff {symdiff} at n={n}"
                ));
            }
        }
    }
    out.flush()?;
    Ok(outcome)
}

fn run_sample(args: SampleArgs) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let built = args.kernel.build()?;
    outcome.warnings.extend(built.warnings.iter().cloned());
    let batch = sample_dpp(&built.kernel, args.seed, args.samples)?;
    let mut out = open_out(&args.out)?;
    write_preamble(
        &mut *out,
        "sample",
        &[
            ("seed", args.seed.to_string()),
            ("bounding_radius", batch.bounding_radius.to_string()),
        ],
    )?;
    write_samples_csv(&batch, &mut *out)?;
    out.flush()?;
    if let Some(path) = &args.svg {
        let first: Vec<(f64, f64)> = batch.configurations[0]
            .points
            .iter()
            .map(|p| (p.x, p.xi))
            .collect();
        svg_scatter(&first, Some(batch.bounding_radius), path)?;
    }
    eprintln!(
        "sample: {} configurations of {} points, acceptance {:.4}",
        args.samples,
        built.kernel.rank(),
        batch.acceptance_rate()
    );

    // the pure laws admit an exact radial cross-check once enough samples
    if let ProjectionKernel::PurePoly { level, indices } = &built.kernel {
        if args.samples >= 1000 {
            let law = radial_law(*level, indices)?;
            let edges = band_edges(&law, 8);
            let radii = batch_radii(&batch);
            let report = radii_distribution_test(&radii, &law, &edges)?;
            if !report.pass {
                outcome.failures.push(format!(
                    "sampled radii deviate from the radial law (chi2 {:.2}, dof {})",
                    report.chi_square, report.dof
                ));
            }
        } else {
            outcome
                .warnings
                .push("fewer than 1000 samples: radial cross-check skipped".to_string());
        }
    }
    Ok(outcome)
}

fn band_edges(law: &RadialLaw, bands: usize) -> Vec<f64> {
    let top = law.component_count() - 1;
    let hi = law.quantile(top, 0.9999) * 1.1;
    (0..=bands).map(|i| hi * i as f64 / bands as f64).collect()
}

fn run_kostlan(args: KostlanArgs) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    if args.modes == 0 {
        return Err(invalid("--modes must be at least 1"));
    }
    let indices = IndexSet::first(args.modes);
    let law = radial_law(args.level, &indices)?;
    let samples = sample_kostlan(&law, args.seed, args.samples)?;

    let mut pairs = vec![
        ("level", args.level.to_string()),
        ("modes", args.modes.to_string()),
        ("samples", args.samples.to_string()),
        ("seed", args.seed.to_string()),
    ];
    for &radius in &args.holes {
        if !(radius > 0.0) {
            return Err(invalid(format!("--hole radius must be positive, got {radius}")));
        }
        let analytic = hole_probability(args.level, &indices, radius)?;
        let empty = samples
            .iter()
            .filter(|s| s.radii.iter().all(|&r| r >= radius))
            .count();
        let empirical = empty as f64 / args.samples as f64;
        pairs.push(("hole_analytic", format!("{radius}:{analytic}")));
        pairs.push(("hole_empirical", format!("{radius}:{empirical}")));
    }

    let mut out = open_out(&args.out)?;
    write_preamble(&mut *out, "kostlan", &pairs)?;
    writeln!(out, "sample_id,mode,radius")?;
    for s in &samples {
        for (c, r) in s.radii.iter().enumerate() {
            writeln!(out, "{},{},{}", s.sample_id, indices.as_slice()[c], r)?;
        }
    }
    out.flush()?;

    if args.bands > 0 {
        if args.samples >= 1000 {
            let edges = band_edges(&law, args.bands);
            let radii: Vec<Vec<f64>> = samples.iter().map(|s| s.radii.clone()).collect();
            let report = radii_distribution_test(&radii, &law, &edges)?;
            if let Some(path) = &args.report {
                let mut rout = open_out(&Some(path.clone()))?;
                write_preamble(
                    &mut *rout,
                    "kostlan",
                    &[
                        ("level", args.level.to_string()),
                        ("modes", args.modes.to_string()),
                        ("seed", args.seed.to_string()),
                    ],
                )?;
                write_distribution_report_csv(&report, &mut *rout)?;
                rout.flush()?;
            }
            eprintln!(
                "kostlan: distribution {} (chi2 {:.2}, dof {})",
                if report.pass { "pass" } else { "FAIL" },
                report.chi_square,
                report.dof
            );
            if !report.pass {
                outcome.failures.push(format!(
                    "radii distribution off the law (chi2 {:.2}, dof {})",
                    report.chi_square, report.dof
                ));
            }
        } else {
            outcome
                .warnings
                .push("fewer than 1000 samples: distribution report skipped".to_string());
        }
    }
    Ok(outcome)
}

fn run_weyl(args: WeylArgs) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    if args.areas.is_empty() {
        return Err(invalid("--areas needs at least one value"));
    }
    for &a in &args.areas {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("area must be positive, got {a}")));
        }
    }
    let mut out = open_out(&args.out)?;
    write_preamble(
        &mut *out,
        "weyl",
        &[
            ("level", args.level.to_string()),
            (
                "areas",
                args.areas
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("delta", args.delta.to_string()),
        ],
    )?;
    writeln!(out, "area,count,excess,perimeter,normalized")?;
    let mut normalized_all = Vec::new();
    for &area in &args.areas {
        let radius = (area / std::f64::consts::PI).sqrt();
        let mus = disk_spectrum(args.level, radius, area)?;
        let count = weyl_count(&mus, args.delta)?;
        let excess = count as f64 - area;
        let perimeter = 2.0 * std::f64::consts::PI * radius;
        let normalized = excess.abs() / perimeter;
        normalized_all.push(normalized);
        writeln!(out, "{area},{count},{excess},{perimeter},{normalized}")?;
    }
    out.flush()?;
    if args.areas.len() >= 2 {
        // boundary scaling: the normalized deficiency must not grow along
        // the dilation sweep beyond a factor 1.5 of its first value
        let first = normalized_all[0].max(1e-12);
        for (i, &v) in normalized_all.iter().enumerate().skip(1) {
            if v > 1.5 * first {
                outcome.failures.push(format!(
                    "normalized count deficiency grew from {first} to {v} at area {}",
                    args.areas[i]
                ));
            }
        }
    } else {
        outcome
            .warnings
            .push("single area: boundary scaling not checked".to_string());
    }
    Ok(outcome)
}

/// Full eigenvalue list of the level-`level` disk localization operator,
/// scanned upward until three consecutive eigenvalues drop below 1e-9 past
/// the bulk edge.
fn disk_spectrum(level: usize, radius: f64, area: f64) -> Result<Vec<f64>> {
    let mut mus = Vec::new();
    let mut below = 0usize;
    let mut j = 0usize;
    loop {
        let mu = mu_radial(level, j, radius)?;
        mus.push(mu);
        if mu < 1e-9 {
            below += 1;
        } else {
            below = 0;
        }
        if below >= 3 && (j as f64) > area {
            break;
        }
        j += 1;
        if j > 200_000 {
            return Err(Error::Numerical(
                "disk spectrum scan did not terminate".to_string(),
            ));
        }
    }
    Ok(mus)
}

// ── plots ────────────────────────────────────────────────────────────────

const SVG_W: f64 = 720.0;
const SVG_H: f64 = 480.0;
const SVG_MARGIN: f64 = 50.0;

fn svg_open(buf: &mut String) {
    buf.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n<rect width=\"{SVG_W}\" height=\"{SVG_H}\" \
         fill=\"white\"/>\n"
    ));
}

/// Eigenvalue staircase: index against value in [0, 1], with an optional
/// horizontal threshold line.
fn svg_staircase(values: &[f64], threshold: Option<f64>, path: &Path) -> Result<()> {
    let n = values.len().max(2);
    let x_of = |i: usize| SVG_MARGIN + (SVG_W - 2.0 * SVG_MARGIN) * i as f64 / (n - 1) as f64;
    let y_of = |v: f64| SVG_H - SVG_MARGIN - (SVG_H - 2.0 * SVG_MARGIN) * v.clamp(0.0, 1.0);
    let mut buf = String::new();
    svg_open(&mut buf);
    buf.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = SVG_MARGIN,
        b = SVG_H - SVG_MARGIN,
        r = SVG_W - SVG_MARGIN,
        t = SVG_MARGIN
    ));
    if let Some(th) = threshold {
        buf.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#999\" \
             stroke-dasharray=\"6 4\"/>\n",
            SVG_MARGIN,
            SVG_W - SVG_MARGIN,
            y = y_of(th)
        ));
    }
    let pts: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{},{}", x_of(i), y_of(v)))
        .collect();
    buf.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\"/>\n",
        pts.join(" ")
    ));
    buf.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\">0</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\">1</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
        SVG_MARGIN - 14.0,
        SVG_H - SVG_MARGIN + 4.0,
        SVG_MARGIN - 14.0,
        SVG_MARGIN + 4.0,
        SVG_W - SVG_MARGIN - 10.0,
        SVG_H - SVG_MARGIN + 16.0,
        values.len().saturating_sub(1)
    ));
    buf.push_str("</svg>\n");
    std::fs::write(path, buf)?;
    Ok(())
}

/// Scatter plot of one configuration, with an optional reference circle.
fn svg_scatter(points: &[(f64, f64)], circle: Option<f64>, path: &Path) -> Result<()> {
    let mut extent = circle.unwrap_or(0.0);
    for &(x, y) in points {
        extent = extent.max(x.abs()).max(y.abs());
    }
    let extent = (extent * 1.1).max(1.0);
    let half = (SVG_W.min(SVG_H) - 2.0 * SVG_MARGIN) / 2.0;
    let cx = SVG_W / 2.0;
    let cy = SVG_H / 2.0;
    let px = |x: f64| cx + half * x / extent;
    let py = |y: f64| cy - half * y / extent;
    let mut buf = String::new();
    svg_open(&mut buf);
    buf.push_str(&format!(
        "<line x1=\"{}\" y1=\"{cy}\" x2=\"{}\" y2=\"{cy}\" stroke=\"#ddd\"/>\n\
         <line x1=\"{cx}\" y1=\"{}\" x2=\"{cx}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
        px(-extent),
        px(extent),
        py(extent),
        py(-extent)
    ));
    if let Some(r) = circle {
        buf.push_str(&format!(
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\" fill=\"none\" stroke=\"#999\" \
             stroke-dasharray=\"6 4\"/>\n",
            half * r / extent
        ));
    }
    for &(x, y) in points {
        buf.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#1f6feb\"/>\n",
            px(x),
            py(y)
        ));
    }
    buf.push_str("</svg>\n");
    std::fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing_accepts_both_forms_and_rejects_garbage() {
        assert_eq!(parse_window("hermite:3").unwrap().label(), "hermite:3");
        assert!(parse_window("hermite:x").is_err());
        assert!(parse_window("gauss").is_err());
    }

    #[test]
    fn pair_parsers_trim_and_validate() {
        assert_eq!(parse_usize_pair("64, 128", "q").unwrap(), (64, 128));
        assert!(parse_usize_pair("64", "q").is_err());
        assert_eq!(parse_f64_pair("-1.5,2.5", "r").unwrap(), (-1.5, 2.5));
        assert!(parse_f64_pair("a,b", "r").is_err());
    }

    #[test]
    fn disk_spectrum_matches_expected_count_at_half() {
        // area 25, level 1: 22 eigenvalues clear 1/2
        let radius = (25.0 / std::f64::consts::PI).sqrt();
        let mus = disk_spectrum(1, radius, 25.0).unwrap();
        assert_eq!(weyl_count(&mus, 0.5).unwrap(), 22);
    }

    #[test]
    fn kernel_select_requires_a_source() {
        let sel = KernelSelect {
            pure: None,
            window: "hermite:0".to_string(),
            domain: None,
            basis: None,
            quad: None,
        };
        assert!(sel.build().is_err());
    }

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
