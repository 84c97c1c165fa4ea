//! Finite approximations on cell grids and Monte Carlo checks of the coupling.

use crate::error::{Error, Result};
use crate::finite::{
    coupling_feasible, palm_matrix, sample_coupled_many, subset_law, xi_law, FiniteDpp, MAX_COUPLING_SITES,
};
use crate::kernel::{GroundSpace, Kernel, Point};
use crate::numerics::CMatrix;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::PI;

/// Spectrum slack tolerated after discretization; smaller excursions are clamped.
pub const GRID_SPECTRUM_TOLERANCE: f64 = 1e-3;

/// Largest grid accepted by [`grid_discretize`].
pub const MAX_GRID_SITES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    /// Axis-aligned box `[lo_i, hi_i]` in `R^d`.
    Box(Vec<(f64, f64)>),
    /// The whole sphere.
    Sphere,
}

impl Window {
    /// Square `[lo, hi]^2`.
    pub fn square(lo: f64, hi: f64) -> Window {
        Window::Box(vec![(lo, hi), (lo, hi)])
    }
}

/// Discretized kernel with its cell centers.
#[derive(Debug, Clone)]
pub struct GridModel {
    pub dpp: FiniteDpp,
    /// Cell centers; site `i` of `dpp` is `points[i - 1]`.
    pub points: Vec<Point>,
    pub cell_measure: f64,
}

impl GridModel {
    /// Eigenvalues clamped into `[0, 1]`, with their original values.
    pub fn clamp_report(&self) -> &[f64] {
        self.dpp.clamped()
    }

    /// Site whose cell center is closest to `p`.
    pub fn nearest_site(&self, p: &Point) -> usize {
        let dist = |q: &Point| -> f64 {
            q.coords()
                .iter()
                .zip(p.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        };
        1 + (0..self.points.len())
            .min_by(|&a, &b| dist(&self.points[a]).total_cmp(&dist(&self.points[b])))
            .expect("grid is nonempty")
    }
}

fn box_centers(bounds: &[(f64, f64)], resolution: usize) -> (Vec<Point>, f64) {
    let d = bounds.len();
    let widths: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo) / resolution as f64).collect();
    let n = resolution.pow(d as u32);
    let points = (0..n)
        .map(|mut idx| {
            let mut x = vec![0.0; d];
            for (axis, xi) in x.iter_mut().enumerate() {
                let j = idx % resolution;
                idx /= resolution;
                *xi = bounds[axis].0 + (j as f64 + 0.5) * widths[axis];
            }
            Point::Euclidean(x)
        })
        .collect();
    (points, widths.iter().product())
}

/// Equal-area cells: `r` bands of equal height in `z` times `2r` longitudes on `S^2`,
/// `r` equal arcs on `S^1`.
fn sphere_centers(d: usize, resolution: usize) -> Result<(Vec<Point>, f64)> {
    let r = resolution as f64;
    match d {
        1 => Ok((
            (0..resolution)
                .map(|j| {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / r;
                    Point::Sphere(vec![phi.cos(), phi.sin()])
                })
                .collect(),
            2.0 * PI / r,
        )),
        2 => {
            let mut points = Vec::with_capacity(2 * resolution * resolution);
            for band in 0..resolution {
                let z = -1.0 + 2.0 * (band as f64 + 0.5) / r;
                let s = (1.0 - z * z).sqrt();
                for j in 0..2 * resolution {
                    let phi = PI * (j as f64 + 0.5) / r;
                    points.push(Point::Sphere(vec![s * phi.cos(), s * phi.sin(), z]));
                }
            }
            Ok((points, 2.0 * PI / (r * r)))
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// `K_grid[i][j] = K(c_i, c_j) * cell_measure` at midpoint cell centers.
///
/// Spectra that leave `[0, 1]` by at most `1e-3` are clamped and reported; larger
/// excursions fail with [`Error::CoarseGrid`].
pub fn grid_discretize(kernel: &Kernel, window: &Window, resolution: usize) -> Result<GridModel> {
    if resolution == 0 {
        return Err(Error::InvalidInput("resolution must be at least 1".into()));
    }
    let (points, cell_measure) = match (kernel.space(), window) {
        (GroundSpace::Euclidean(d), Window::Box(bounds)) => {
            if bounds.len() != d {
                return Err(Error::InvalidInput(format!("window has {} axes, space has {d}", bounds.len())));
            }
            if bounds.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && hi > lo)) {
                return Err(Error::InvalidInput("window bounds must satisfy lo < hi".into()));
            }
            let n = (resolution as u128).pow(d as u32);
            if n > MAX_GRID_SITES as u128 {
                return Err(Error::SizeGuard {
                    what: "grid sites",
                    size: n.min(usize::MAX as u128) as usize,
                    max: MAX_GRID_SITES,
                });
            }
            box_centers(bounds, resolution)
        }
        (GroundSpace::Sphere(d), Window::Sphere) => {
            let n = if d == 1 { resolution } else { 2 * resolution * resolution };
            if n > MAX_GRID_SITES {
                return Err(Error::SizeGuard {
                    what: "grid sites",
                    size: n,
                    max: MAX_GRID_SITES,
                });
            }
            sphere_centers(d, resolution)?
        }
        (GroundSpace::Finite(n), _) => ((1..=n).map(Point::Site).collect(), 1.0),
        (space, w) => {
            return Err(Error::InvalidInput(format!("window {w:?} does not fit {space:?}")));
        }
    };
    let m: CMatrix = kernel.gram(&points).scale(cell_measure);
    let dpp = FiniteDpp::validate_with_tolerance(m, GRID_SPECTRUM_TOLERANCE).map_err(|e| match e {
        Error::Spectrum { eigenvalue, .. } => Error::CoarseGrid { eigenvalue },
        other => other,
    })?;
    Ok(GridModel {
        dpp,
        points,
        cell_measure,
    })
}

/// Outcome of [`mc_validate_coupling`].
#[derive(Debug, Clone, PartialEq)]
pub struct McCouplingReport {
    /// Grid site nearest to the requested anchor.
    pub site: usize,
    pub max_flow: f64,
    pub samples: usize,
    /// `p_u` of the grid model.
    pub p_exact: f64,
    /// Fraction of coupled draws with `S != T`.
    pub p_hat: f64,
    /// Binomial standard deviation of `p_hat` around `p_exact`.
    pub p_sigma: f64,
    /// `f_u` of the grid model, by site.
    pub density_exact: Vec<f64>,
    /// Displaced-site counts among draws with `S != T`.
    pub histogram: Vec<u64>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// 99% quantile of the chi-square law.
    pub chi_square_critical: f64,
}

impl McCouplingReport {
    pub fn p_within_three_sigma(&self) -> bool {
        (self.p_hat - self.p_exact).abs() <= 3.0 * self.p_sigma + 1e-12
    }

    pub fn chi_square_pass(&self) -> bool {
        self.degrees_of_freedom == 0 || self.chi_square <= self.chi_square_critical
    }
}

/// Minimum expected count per chi-square bin.
pub const MIN_EXPECTED_PER_BIN: f64 = 20.0;

/// Pearson statistic after pooling bins with fewer than 20 expected counts.
/// Returns `(statistic, degrees of freedom, 99% critical value)`.
pub fn chi_square_test(observed: &[u64], probabilities: &[f64]) -> (f64, usize, f64) {
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let mut order: Vec<usize> = (0..observed.len()).filter(|&i| probabilities[i] > 0.0).collect();
    order.sort_by(|&a, &b| probabilities[a].total_cmp(&probabilities[b]));
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for i in order {
        obs += observed[i] as f64;
        exp += probabilities[i] * total;
        if exp >= MIN_EXPECTED_PER_BIN {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => bins.push((obs, exp)),
        }
    }
    let stat = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let critical = if dof == 0 {
        f64::INFINITY
    } else {
        ChiSquared::new(dof as f64).expect("positive degrees of freedom").inverse_cdf(0.99)
    };
    (stat, dof, critical)
}

/// Exact laws on a small grid, flow feasibility, then `samples` coupled draws
/// compared with the exact `p_u` and `f_u`.
pub fn mc_validate_coupling(
    kernel: &Kernel,
    u: &Point,
    window: &Window,
    resolution: usize,
    samples: usize,
    seed: u64,
) -> Result<McCouplingReport> {
    let grid = grid_discretize(kernel, window, resolution)?;
    let n = grid.dpp.n();
    if n > MAX_COUPLING_SITES {
        return Err(Error::SizeGuard {
            what: "coupling sites",
            size: n,
            max: MAX_COUPLING_SITES,
        });
    }
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let site = match u {
        Point::Site(i) => *i,
        other => grid.nearest_site(other),
    };
    let palm = palm_matrix(&grid.dpp, site)?;
    let law_x = subset_law(&grid.dpp)?;
    let law_xu = subset_law(&palm)?;
    let (max_flow, table) = coupling_feasible(&law_x, &law_xu, site)?;
    let table = table.ok_or(Error::TheoremViolation { max_flow })?;
    let xi = xi_law(&table, &grid.dpp, site)?;

    let mut histogram = vec![0u64; n];
    let mut moved = 0usize;
    for (s, t) in sample_coupled_many(&table, samples, seed) {
        let diff = s & !t;
        if diff != 0 {
            moved += 1;
            histogram[diff.trailing_zeros() as usize] += 1;
        }
    }
    let (chi_square, degrees_of_freedom, chi_square_critical) = chi_square_test(&histogram, &xi.density);
    Ok(McCouplingReport {
        site,
        max_flow,
        samples,
        p_exact: xi.p,
        p_hat: moved as f64 / samples as f64,
        p_sigma: (xi.p * (1.0 - xi.p) / samples as f64).sqrt(),
        density_exact: xi.density,
        histogram,
        chi_square,
        degrees_of_freedom,
        chi_square_critical,
    })
}
