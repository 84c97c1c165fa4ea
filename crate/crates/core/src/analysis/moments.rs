//! Moments and radial profiles of the displacement `|Z_u - u|`.

use crate::error::{Error, Result};
use crate::kernel::{repulsiveness_p, GroundSpace, Kernel, Point, Symmetry};
use crate::numerics::{gamma_fn, integrate, integrate_radial, QuadratureSpec, RadialIntegral};
use std::f64::consts::PI;

fn check_order(k: f64) -> Result<()> {
    if !(k.is_finite() && k > -2.0) {
        return Err(Error::ParamBound(format!("moment order must exceed -2, got {k}")));
    }
    Ok(())
}

/// `E|Z_u - u|^k` for the planar jinc kernel; `INFINITY` for `k >= 1`.
pub fn jinc_moment_closed(k: f64) -> Result<f64> {
    check_order(k)?;
    if k >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(gamma_fn(1.0 + k / 2.0)? * gamma_fn(1.0 - k)? / (gamma_fn(2.0 - k / 2.0)? * gamma_fn(1.0 - k / 2.0)?.powi(2)))
}

/// `E|Z_u - u|^k = Gamma(1 + k/2) / (pi rho)^(k/2)` for the Ginibre kernel at intensity `rho`.
pub fn ginibre_moment(k: f64, rho: f64) -> Result<f64> {
    check_order(k)?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::ParamBound(format!("intensity must be positive, got {rho}")));
    }
    Ok(gamma_fn(1.0 + k / 2.0)? / (PI * rho).powf(k / 2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    pub k: f64,
    /// `Some(INFINITY)` when the moment is infinite; `None` when no closed form is known.
    pub closed_form: Option<f64>,
    /// `None` when the quadrature detected divergence.
    pub quadrature: Option<f64>,
    pub abs_error: f64,
    pub tail_estimate: f64,
    /// Fitted power-law decay of the integrand, when a tail was present.
    pub tail_exponent: Option<f64>,
}

impl MomentResult {
    pub fn diverged(&self) -> bool {
        self.quadrature.is_none()
    }
}

/// Closed form for the families that have one: Ginibre (`|Z - u|^2` exponential
/// with mean `beta`) and planar jinc, possibly thinned and rescaled.
fn closed_moment(kernel: &Kernel, k: f64) -> Result<Option<f64>> {
    let desc = kernel.descriptor();
    let beta = desc.get("beta").unwrap_or(1.0);
    let scale = beta.powf(k / 2.0);
    Ok(match desc.family.as_str() {
        "ginibre" => Some(gamma_fn(1.0 + k / 2.0)? * scale),
        "jinc" => Some(jinc_moment_closed(k)?),
        "thinned-jinc" => Some(jinc_moment_closed(k)? * scale),
        _ => None,
    })
}

/// Integrand of the radial law of `|Z_u - u|`: `S_(d-1) r^(d-1) |K(u, u + r e_1)|^2`.
fn radial_mass<'a>(kernel: &'a Kernel, u: &Point) -> Result<impl Fn(f64) -> f64 + 'a> {
    let GroundSpace::Euclidean(d) = kernel.space() else {
        return Err(Error::InvalidInput("radial laws need a Euclidean kernel".into()));
    };
    if kernel.descriptor().symmetry != Symmetry::RadialModulus {
        return Err(Error::NotIsotropic(format!(
            "'{}' kernel does not declare a radial modulus",
            kernel.descriptor().family
        )));
    }
    kernel.space().check(u)?;
    let shell = 2.0 * PI.powf(d as f64 / 2.0) / gamma_fn(d as f64 / 2.0)?;
    let base = u.coords().to_vec();
    let anchor = u.clone();
    Ok(move |r: f64| {
        let mut x = base.clone();
        x[0] += r;
        shell * r.powi(d as i32 - 1) * kernel.eval(&anchor, &Point::Euclidean(x)).norm_sqr()
    })
}

/// `||K(u, .)||^2`, exact for kernels declared projections.
fn norm_sq(kernel: &Kernel, u: &Point, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    if kernel.descriptor().projection {
        return Ok((kernel.intensity_at(u), 0.0));
    }
    let r = repulsiveness_p(kernel, u, spec)?;
    let kuu = kernel.intensity_at(u);
    Ok((r.norm_sq, r.quadrature_error * kuu))
}

/// `E|Z_u - u|^order` by radial quadrature with power-law tail extrapolation.
pub fn moment_quadrature(kernel: &Kernel, u: &Point, order: f64, spec: &QuadratureSpec) -> Result<MomentResult> {
    check_order(order)?;
    let mass = radial_mass(kernel, u)?;
    let (norm, norm_error) = norm_sq(kernel, u, spec)?;
    if !(norm > 0.0) {
        return Err(Error::VanishingIntensity(norm));
    }
    let closed_form = closed_moment(kernel, order)?;
    let f = |r: f64| if r == 0.0 { 0.0 } else { r.powf(order) * mass(r) / norm };
    match integrate_radial(f, spec) {
        Ok(v) => Ok(MomentResult {
            k: order,
            closed_form,
            quadrature: Some(v.value),
            abs_error: v.abs_error + v.value.abs() * norm_error / norm,
            tail_estimate: v.tail_estimate,
            tail_exponent: v.tail_exponent,
        }),
        Err(Error::Divergent { exponent }) => Ok(MomentResult {
            k: order,
            closed_form,
            quadrature: None,
            abs_error: f64::INFINITY,
            tail_estimate: f64::INFINITY,
            tail_exponent: Some(exponent),
        }),
        Err(e) => Err(e),
    }
}

/// Density of `|Z_u - u|` on a grid of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub model: String,
    pub radii: Vec<f64>,
    pub density: Vec<f64>,
}

impl RadialProfile {
    /// Trapezoid rule over the grid.
    pub fn trapezoid(&self) -> f64 {
        self.radii
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(r, f)| 0.5 * (r[1] - r[0]) * (f[0] + f[1]))
            .sum()
    }
}

pub fn radial_profile(kernel: &Kernel, u: &Point, radii: &[f64], spec: &QuadratureSpec) -> Result<RadialProfile> {
    if radii.windows(2).any(|w| !(w[1] > w[0])) || radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidInput("radii must be nonnegative and strictly increasing".into()));
    }
    let mass = radial_mass(kernel, u)?;
    let (norm, _) = norm_sq(kernel, u, spec)?;
    if !(norm > 0.0) {
        return Err(Error::VanishingIntensity(norm));
    }
    Ok(RadialProfile {
        model: kernel.descriptor().family.clone(),
        radii: radii.to_vec(),
        density: radii.iter().map(|&r| mass(r) / norm).collect(),
    })
}

/// Mass of the law of `|Z_u - u|` beyond `r0`: the extrapolated total minus `int_0^r0`.
pub fn radial_tail_mass(kernel: &Kernel, u: &Point, r0: f64, spec: &QuadratureSpec) -> Result<RadialIntegral> {
    if !(r0.is_finite() && r0 >= 0.0) {
        return Err(Error::InvalidInput(format!("tail start must be nonnegative, got {r0}")));
    }
    let mass = radial_mass(kernel, u)?;
    let (norm, _) = norm_sq(kernel, u, spec)?;
    if !(norm > 0.0) {
        return Err(Error::VanishingIntensity(norm));
    }
    let density = |r: f64| mass(r) / norm;
    let total = integrate_radial(density, spec)?;
    let head = integrate(density, 0.0, r0, spec)?;
    Ok(RadialIntegral {
        value: total.value - head.value,
        abs_error: total.abs_error + head.abs_error,
        core: total.core - head.value,
        tail_estimate: total.tail_estimate,
        tail_exponent: total.tail_exponent,
    })
}
