//! Subcommands. Each builds a [`Report`] or fails with a [`Failure`] that
//! knows its exit code.

use crate::csv::{flag, number, Block, Report};
use crate::spec_file::{KernelSpecFile, Model, SpecError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dpp_palm::analysis::{
    chi_square_test, grid_discretize, moment_quadrature, radial_profile, radial_tail_mass, GridModel, Window,
};
use dpp_palm::finite::{
    coupling_feasible, f_u_finite, p_u_finite, palm_matrix, sample_coupled_many, sample_exact_many,
    sample_spectral_many, subset_law, xi_law, MAX_COUPLING_SITES,
};
use dpp_palm::kernel::{repulsiveness_p, ProfileCoord};
use dpp_palm::models::{
    ginibre_kernel, jinc_kernel, multiquadric_comparison, sphere_p, thin_rescale, DISCREPANCY_THRESHOLD,
};
use dpp_palm::{Error, FiniteDpp, GinibreParams, GroundSpace, Kernel, Point, QuadratureSpec};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "dpp-palm", version, about = "Palm couplings and repulsiveness of determinantal point processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureFlags {
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Radius beyond which radial integrals are extrapolated.
    #[arg(long)]
    pub truncation_radius: Option<f64>,
}

impl QuadratureFlags {
    fn spec(&self) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default();
        if let Some(t) = self.rel_tol {
            spec = spec.with_relative_tolerance(t);
        }
        if let Some(r) = self.truncation_radius {
            spec = spec.with_truncation_radius(r);
        }
        spec
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridFlags {
    /// Box "xmin,xmax[,ymin,ymax,...]" for discretizing Euclidean kernels.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Cells per axis (Euclidean) or latitude bands (sphere).
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileModel {
    Ginibre,
    Jinc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a kernel spec and name the first violated condition.
    Validate { spec: PathBuf },
    /// p_u, ||K(u,.)||^2 and a profile of the displacement density f_u.
    Repulsiveness {
        spec: PathBuf,
        /// Site index, "x,y,..." or a sphere direction "x,y,z".
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<String>,
        #[command(flatten)]
        quadrature: QuadratureFlags,
    },
    /// Max-flow coupling of X and its reduced Palm version, with coupled draws.
    Couple {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        grid: GridFlags,
    },
    /// Radial densities of |Z_0| for the Ginibre and jinc kernels at equal intensity.
    Profile {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "ginibre,jinc")]
        models: Vec<ProfileModel>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Radii as "start:stop:step".
        #[arg(long, default_value = "0:10:0.01")]
        radii: String,
        #[command(flatten)]
        quadrature: QuadratureFlags,
    },
    /// Moments E|Z_u - u|^k, closed form against quadrature.
    Moments {
        #[arg(long, value_enum)]
        model: ProfileModel,
        /// Comma-separated orders, each above -2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        k: Vec<f64>,
        /// Ginibre intensity; the standard kernel has 1/pi.
        #[arg(long)]
        rho: Option<f64>,
        #[command(flatten)]
        quadrature: QuadratureFlags,
    },
    /// Exact draws, from the matrix itself or from a grid discretization.
    Sample {
        spec: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also list every point of every draw.
        #[arg(long)]
        points: bool,
        #[command(flatten)]
        grid: GridFlags,
    },
}

/// Why a command failed.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input: spec file, flag value or anchor.
    Parse(String),
    /// Well-formed but inconsistent request.
    Usage(String),
    Library(Error),
    /// An infeasible coupling, with the laws involved.
    Theorem { max_flow: f64, dump: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Library(e)
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Failure {
        Failure::Parse(e.to_string())
    }
}

/// Exit code and diagnostic token of a library error.
pub fn classify(e: &Error) -> (i32, &'static str) {
    match e {
        Error::NonHermitian { .. } => (2, "non-Hermitian"),
        Error::Spectrum { .. } | Error::NegativeEigenvalue(_) | Error::NegativeDeterminant(_) => (2, "spectrum"),
        Error::ExistenceBound { .. } => (2, "existence-bound"),
        Error::ParamBound(_) | Error::Pole(_) => (2, "param-bound"),
        Error::CoarseGrid { .. } => (2, "coarse-grid"),
        Error::VanishingIntensity(_) => (2, "zero-intensity"),
        Error::InvalidKernel(_) => (2, "contraction"),
        Error::NotIsotropic(_) => (2, "not-isotropic"),
        Error::NonConvergence { .. } | Error::Divergent { .. } => (2, "quadrature"),
        Error::PointMismatch(_) | Error::SiteMismatch(_) => (2, "anchor"),
        Error::UnsupportedDimension(_) => (2, "dimension"),
        Error::InvalidInput(_) => (2, "invalid-input"),
        Error::NotSquare { .. } => (3, "parse"),
        Error::SizeGuard { .. } => (4, "size-guard"),
        Error::TheoremViolation { .. } => (5, "theorem-violation"),
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        self.parts().0
    }

    pub fn token(&self) -> &'static str {
        self.parts().1
    }

    fn parts(&self) -> (i32, &'static str) {
        match self {
            Failure::Parse(_) => (3, "parse"),
            Failure::Usage(_) => (2, "usage"),
            Failure::Library(e) => classify(e),
            Failure::Theorem { .. } => (5, "theorem-violation"),
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Parse(m) | Failure::Usage(m) => m.clone(),
            Failure::Library(e) => e.to_string(),
            Failure::Theorem { max_flow, dump } => {
                format!("coupling infeasible: max flow {max_flow:.12} < 1\n{dump}")
            }
        }
    }
}

/// A finished command: the report and any warnings for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub report: Report,
    pub warnings: Vec<String>,
}

pub fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { spec } => validate(spec),
        Command::Repulsiveness { spec, anchor, quadrature } => repulsiveness(spec, anchor.as_deref(), &quadrature.spec()),
        Command::Couple {
            spec,
            anchor,
            seed,
            samples,
            grid,
        } => couple(spec, anchor.as_deref(), *seed, *samples, grid),
        Command::Profile {
            models,
            beta,
            radii,
            quadrature,
        } => profile(models, *beta, radii, &quadrature.spec()),
        Command::Moments { model, k, rho, quadrature } => moments(*model, k, *rho, &quadrature.spec()),
        Command::Sample {
            spec,
            samples,
            seed,
            points,
            grid,
        } => sample(spec, *samples, *seed, *points, grid),
    }
}

fn load(path: &PathBuf) -> Result<Model, Failure> {
    let spec = KernelSpecFile::load(path)?;
    Ok(spec.build()??)
}

fn space_name(space: GroundSpace) -> (String, usize) {
    match space {
        GroundSpace::Finite(n) => ("finite".into(), n),
        GroundSpace::Euclidean(d) => ("euclidean".into(), d),
        GroundSpace::Sphere(d) => ("sphere".into(), d),
    }
}

fn floats(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::Parse(format!("{what}: cannot read `{t}` as a finite number")))
        })
        .collect()
}

/// Anchor encoding per space: site index, `x,y,...`, or a sphere direction.
pub fn parse_anchor(text: Option<&str>, space: GroundSpace) -> Result<Point, Failure> {
    let Some(text) = text else {
        return Ok(space.origin());
    };
    match space {
        GroundSpace::Finite(_) => text
            .trim()
            .parse::<usize>()
            .map(Point::Site)
            .map_err(|_| Failure::Parse(format!("anchor: expected a site index, got `{text}`"))),
        GroundSpace::Euclidean(d) => {
            let x = floats(text, "anchor")?;
            if x.len() != d {
                return Err(Failure::Parse(format!("anchor: expected {d} coordinates, got {}", x.len())));
            }
            Ok(Point::Euclidean(x))
        }
        GroundSpace::Sphere(d) => {
            let x = floats(text, "anchor")?;
            if x.len() != d + 1 {
                return Err(Failure::Parse(format!("anchor: expected {} coordinates, got {}", d + 1, x.len())));
            }
            Ok(Point::on_sphere(x)?)
        }
    }
}

/// Window encoding `xmin,xmax,ymin,ymax,...` for a space of dimension `d`.
pub fn parse_window(text: &str, d: usize) -> Result<Window, Failure> {
    let x = floats(text, "window")?;
    if x.len() != 2 * d {
        return Err(Failure::Parse(format!("window: expected {} numbers, got {}", 2 * d, x.len())));
    }
    let bounds: Vec<(f64, f64)> = x.chunks(2).map(|c| (c[0], c[1])).collect();
    if bounds.iter().any(|(lo, hi)| !(hi > lo)) {
        return Err(Failure::Parse("window: every max must exceed its min".into()));
    }
    Ok(Window::Box(bounds))
}

/// Finite model of a spec: the matrix itself or a grid discretization.
fn finite_model(model: &Model, grid: &GridFlags) -> Result<(FiniteDpp, Option<GridModel>), Failure> {
    if let Model::Finite(dpp) = model {
        return Ok((dpp.clone(), None));
    }
    let kernel = model.kernel();
    let window = match kernel.space() {
        GroundSpace::Sphere(_) => Window::Sphere,
        GroundSpace::Euclidean(d) => {
            let text = grid
                .window
                .as_deref()
                .ok_or_else(|| Failure::Usage("continuous kernels need --window".into()))?;
            parse_window(text, d)?
        }
        GroundSpace::Finite(_) => unreachable!("finite kernels are handled above"),
    };
    let resolution = grid
        .resolution
        .ok_or_else(|| Failure::Usage("continuous kernels need --resolution".into()))?;
    let g = grid_discretize(&kernel, &window, resolution)?;
    Ok((g.dpp.clone(), Some(g)))
}

fn clamp_warnings(dpp: &FiniteDpp) -> Vec<String> {
    let clamped = dpp.clamped();
    let Some(worst) = clamped
        .iter()
        .copied()
        .max_by(|a, b| (a - a.clamp(0.0, 1.0)).abs().total_cmp(&(b - b.clamp(0.0, 1.0)).abs()))
    else {
        return Vec::new();
    };
    vec![format!(
        "{} eigenvalue(s) clamped into [0, 1], largest excursion at {worst:.6e}",
        clamped.len()
    )]
}

fn validate(path: &PathBuf) -> Result<Outcome, Failure> {
    let model = load(path)?;
    let kernel = model.kernel();
    let (space, dim) = space_name(kernel.space());
    let mut out = Outcome::default();
    let mut b = Block::new(&["family", "space", "dimension", "intensity_at_origin", "clamped_eigenvalues"]);
    let clamped = match &model {
        Model::Finite(dpp) => {
            out.warnings = clamp_warnings(dpp);
            dpp.clamped().len()
        }
        _ => 0,
    };
    b.push(vec![
        kernel.descriptor().family.clone(),
        space,
        dim.to_string(),
        number(kernel.intensity_at(&kernel.space().origin())),
        clamped.to_string(),
    ]);
    out.report.push(b);
    Ok(out)
}

fn repulsiveness(path: &PathBuf, anchor: Option<&str>, spec: &QuadratureSpec) -> Result<Outcome, Failure> {
    let model = load(path)?;
    let kernel = model.kernel();
    let u = parse_anchor(anchor, kernel.space())?;
    let r = repulsiveness_p(&kernel, &u, spec)?;
    let mut out = Outcome::default();

    let mut b = Block::new(&["p_u", "norm_sq", "quadrature_error", "tail_estimate"]);
    b.push(vec![number(r.p_u), number(r.norm_sq), number(r.quadrature_error), number(r.tail_estimate)]);
    out.report.push(b);

    let coord = match r.density_profile.first().map(|(c, _)| c) {
        Some(ProfileCoord::Radius(_)) => "r",
        Some(ProfileCoord::Angle(_)) => "theta",
        _ => "site",
    };
    let mut b = Block::new(&[coord, "f_u"]);
    for (c, f) in &r.density_profile {
        let c = match c {
            ProfileCoord::Site(i) => i.to_string(),
            other => number(other.value()),
        };
        b.push(vec![c, number(*f)]);
    }
    out.report.push(b);

    if let Model::Sphere { model, multiquadric, .. } = &model {
        match multiquadric {
            Some((delta, rho)) => {
                let c = multiquadric_comparison(*delta, *rho)?;
                let mut b = Block::new(&[
                    "p_series",
                    "series_tail_bound",
                    "p_series_closed_form",
                    "p_without_multiplicity",
                    "discrepancy",
                ]);
                b.push(vec![
                    number(c.series.value),
                    number(c.series.tail_bound),
                    number(c.series_closed_form),
                    number(c.without_multiplicity),
                    flag(c.discrepancy),
                ]);
                out.report.push(b);
                if c.discrepancy {
                    out.warnings.push(format!(
                        "p_u without multiplicities ({:.6}) differs from the series ({:.6}) by more than {DISCREPANCY_THRESHOLD:e}",
                        c.without_multiplicity, c.series.value
                    ));
                }
            }
            None => {
                let s = sphere_p(model);
                let mut b = Block::new(&["p_series", "series_tail_bound"]);
                b.push(vec![number(s.value), number(s.tail_bound)]);
                out.report.push(b);
                out.warnings.extend(s.warning);
            }
        }
    }
    Ok(out)
}

fn couple(path: &PathBuf, anchor: Option<&str>, seed: u64, samples: usize, grid: &GridFlags) -> Result<Outcome, Failure> {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let model = load(path)?;
    let (dpp, g) = finite_model(&model, grid)?;
    if dpp.n() > MAX_COUPLING_SITES {
        return Err(Error::SizeGuard {
            what: "coupling sites",
            size: dpp.n(),
            max: MAX_COUPLING_SITES,
        }
        .into());
    }
    let site = match &g {
        None => parse_anchor(anchor, GroundSpace::Finite(dpp.n()))?
            .site()
            .expect("finite anchors are sites"),
        Some(g) => g.nearest_site(&parse_anchor(anchor, model.kernel().space())?),
    };
    let palm = palm_matrix(&dpp, site)?;
    let law_x = subset_law(&dpp)?;
    let law_xu = subset_law(&palm)?;
    let (max_flow, table) = coupling_feasible(&law_x, &law_xu, site)?;
    let Some(table) = table else {
        let mut dump = String::from("subset,law_x,law_palm\n");
        for s in 0..law_x.probabilities().len() {
            let _ = writeln!(dump, "{s},{},{}", number(law_x.prob(s)), number(law_xu.prob(s)));
        }
        return Err(Failure::Theorem { max_flow, dump });
    };
    let xi = xi_law(&table, &dpp, site)?;
    let p_direct = p_u_finite(&dpp, site)?;
    let f_direct = f_u_finite(&dpp, site)?;

    let n = dpp.n();
    let mut histogram = vec![0u64; n];
    let mut moved = 0usize;
    for (s, t) in sample_coupled_many(&table, samples, seed) {
        let diff = s & !t;
        if diff != 0 {
            moved += 1;
            histogram[diff.trailing_zeros() as usize] += 1;
        }
    }
    let p_hat = moved as f64 / samples as f64;
    let mut out = Outcome {
        warnings: clamp_warnings(&dpp),
        ..Outcome::default()
    };

    let mut b = Block::new(&["anchor_site", "max_flow", "p_u", "p_u_direct", "p_hat", "p_sigma", "samples"]);
    b.push(vec![
        site.to_string(),
        number(max_flow),
        number(xi.p),
        number(p_direct),
        number(p_hat),
        number((xi.p * (1.0 - xi.p) / samples as f64).sqrt()),
        samples.to_string(),
    ]);
    out.report.push(b);

    let mut b = Block::new(&["site", "f_u", "f_u_direct", "f_hat"]);
    for v in 0..n {
        let f_hat = if moved == 0 { 0.0 } else { histogram[v] as f64 / moved as f64 };
        b.push(vec![(v + 1).to_string(), number(xi.density[v]), number(f_direct[v]), number(f_hat)]);
    }
    out.report.push(b);

    let (stat, dof, critical) = chi_square_test(&histogram, &xi.density);
    let mut b = Block::new(&["chi_square", "degrees_of_freedom", "critical_99", "pass"]);
    b.push(vec![number(stat), dof.to_string(), number(critical), flag(dof == 0 || stat <= critical)]);
    out.report.push(b);
    Ok(out)
}

/// `start:stop:step` into an inclusive grid.
pub fn parse_radii(text: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Failure::Parse(format!("radii: expected start:stop:step, got `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(bad)?;
    let (start, stop, step) = (v[0], v[1], v[2]);
    if !(start >= 0.0 && stop > start && step > 0.0) {
        return Err(Failure::Parse("radii: need 0 <= start < stop and step > 0".into()));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(Error::SizeGuard {
            what: "profile radii",
            size: count,
            max: 1_000_000,
        }
        .into());
    }
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

/// Ginibre with `alpha = 1` and the planar jinc kernel thinned and rescaled
/// by `beta`: both have intensity `1/pi` and `p_u = beta`.
pub fn profile_kernel(model: ProfileModel, beta: f64) -> dpp_palm::Result<Kernel> {
    match model {
        ProfileModel::Ginibre => ginibre_kernel(GinibreParams::new(1.0, beta)?),
        ProfileModel::Jinc if beta == 1.0 => jinc_kernel(2),
        ProfileModel::Jinc => thin_rescale(&jinc_kernel(2)?, 1.0, beta),
    }
}

fn model_name(m: ProfileModel) -> &'static str {
    match m {
        ProfileModel::Ginibre => "ginibre",
        ProfileModel::Jinc => "jinc",
    }
}

fn profile(models: &[ProfileModel], beta: f64, radii: &str, spec: &QuadratureSpec) -> Result<Outcome, Failure> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::ParamBound(format!("beta must lie in (0, 1], got {beta}")).into());
    }
    let radii = parse_radii(radii)?;
    let mut models = models.to_vec();
    models.dedup();
    let origin = Point::Euclidean(vec![0.0, 0.0]);
    let mut profiles = Vec::new();
    let mut totals = Block::new(&["model", "grid_integral", "tail_mass", "total"]);
    for &m in &models {
        let k = profile_kernel(m, beta)?;
        let p = radial_profile(&k, &origin, &radii, spec)?;
        let tail = radial_tail_mass(&k, &origin, *radii.last().expect("nonempty grid"), spec)?;
        totals.push(vec![
            model_name(m).to_string(),
            number(p.trapezoid()),
            number(tail.value),
            number(p.trapezoid() + tail.value),
        ]);
        profiles.push(p);
    }
    let mut header = vec!["r".to_string()];
    header.extend(models.iter().map(|m| format!("density_{}", model_name(*m))));
    let mut b = Block {
        header,
        rows: Vec::new(),
    };
    for (i, r) in radii.iter().enumerate() {
        let mut row = vec![number(*r)];
        row.extend(profiles.iter().map(|p| number(p.density[i])));
        b.push(row);
    }
    let mut out = Outcome::default();
    out.report.push(b);
    out.report.push(totals);
    Ok(out)
}

fn moments(model: ProfileModel, orders: &[f64], rho: Option<f64>, spec: &QuadratureSpec) -> Result<Outcome, Failure> {
    let kernel = match (model, rho) {
        (ProfileModel::Ginibre, None) => ginibre_kernel(GinibreParams::standard())?,
        (ProfileModel::Ginibre, Some(rho)) => {
            if !(rho.is_finite() && rho > 0.0) {
                return Err(Error::ParamBound(format!("intensity must be positive, got {rho}")).into());
            }
            ginibre_kernel(GinibreParams::new(PI * rho, 1.0 / (PI * rho))?)?
        }
        (ProfileModel::Jinc, None) => jinc_kernel(2)?,
        (ProfileModel::Jinc, Some(_)) => return Err(Failure::Usage("--rho applies to the Ginibre model only".into())),
    };
    let origin = Point::Euclidean(vec![0.0, 0.0]);
    let mut b = Block::new(&[
        "k",
        "closed_form",
        "quadrature",
        "abs_error",
        "tail_estimate",
        "tail_exponent",
        "divergent",
    ]);
    for &k in orders {
        let m = moment_quadrature(&kernel, &origin, k, spec)?;
        b.push(vec![
            number(k),
            number(m.closed_form.unwrap_or(f64::NAN)),
            number(m.quadrature.unwrap_or(f64::INFINITY)),
            number(m.abs_error),
            number(m.tail_estimate),
            number(m.tail_exponent.unwrap_or(f64::NAN)),
            flag(m.diverged()),
        ]);
    }
    let mut out = Outcome::default();
    out.report.push(b);
    Ok(out)
}

fn sample(path: &PathBuf, samples: usize, seed: u64, points: bool, grid: &GridFlags) -> Result<Outcome, Failure> {
    let model = load(path)?;
    let (dpp, g) = finite_model(&model, grid)?;
    let draws = match g {
        None => sample_exact_many(&dpp, samples, seed),
        Some(_) => sample_spectral_many(&dpp, samples, seed),
    };
    let mut out = Outcome {
        warnings: clamp_warnings(&dpp),
        ..Outcome::default()
    };
    let mean = if samples == 0 {
        f64::NAN
    } else {
        draws.iter().map(Vec::len).sum::<usize>() as f64 / samples as f64
    };
    let mut b = Block::new(&["sites", "expected_count", "mean_count", "clamped_eigenvalues", "samples"]);
    b.push(vec![
        dpp.n().to_string(),
        number(dpp.expected_count()),
        number(mean),
        dpp.clamped().len().to_string(),
        samples.to_string(),
    ]);
    out.report.push(b);

    let mut b = Block::new(&["sample", "count"]);
    for (i, d) in draws.iter().enumerate() {
        b.push(vec![i.to_string(), d.len().to_string()]);
    }
    out.report.push(b);

    if points {
        let dim = g.as_ref().map_or(0, |g| g.points[0].coords().len());
        let mut header = vec!["sample".to_string(), "site".to_string()];
        header.extend((1..=dim).map(|i| format!("x{i}")));
        let mut b = Block {
            header,
            rows: Vec::new(),
        };
        for (i, d) in draws.iter().enumerate() {
            for &s in d {
                let mut row = vec![i.to_string(), s.to_string()];
                if let Some(g) = &g {
                    row.extend(g.points[s - 1].coords().iter().map(|x| number(*x)));
                }
                b.push(row);
            }
        }
        out.report.push(b);
    }
    Ok(out)
}
