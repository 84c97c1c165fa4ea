//! Stationary kernels on `R^d`.

use crate::error::{Error, Result};
use crate::kernel::{distance, Descriptor, GroundSpace, Kernel, Point, Symmetry};
use crate::numerics::{bessel_j1, gamma_fn, integrate, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Scaled `beta`-Ginibre parameters; `alpha beta <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GinibreParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GinibreParams {
    pub fn new(alpha: f64, beta: f64) -> Result<GinibreParams> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::ParamBound(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if alpha * beta > 1.0 + 1e-12 {
            return Err(Error::ParamBound(format!("alpha*beta exceeds 1 ({})", alpha * beta)));
        }
        Ok(GinibreParams { alpha, beta })
    }

    pub fn standard() -> GinibreParams {
        GinibreParams { alpha: 1.0, beta: 1.0 }
    }

    pub fn intensity(&self) -> f64 {
        self.alpha / PI
    }
}

/// `K(v, w) = (alpha/pi) exp(v conj(w) / beta - (|v|^2 + |w|^2) / 2beta)` on `R^2 = C`.
pub fn ginibre_kernel(p: GinibreParams) -> Result<Kernel> {
    let GinibreParams { alpha, beta } = GinibreParams::new(p.alpha, p.beta)?;
    let descriptor = Descriptor::new("ginibre")
        .param("alpha", alpha)
        .param("beta", beta)
        .symmetry(Symmetry::RadialModulus)
        .intensity(alpha / PI)
        .projection((alpha * beta - 1.0).abs() < 1e-12);
    Ok(Kernel::new(GroundSpace::Euclidean(2), descriptor, move |v, w| {
        let (a, b) = (v.coords()[0], v.coords()[1]);
        let (c, d) = (w.coords()[0], w.coords()[1]);
        let r2 = (a - c) * (a - c) + (b - d) * (b - d);
        let modulus = alpha / PI * (-r2 / (2.0 * beta)).exp();
        let phase = (b * c - a * d) / beta;
        Complex64::from_polar(modulus, phase)
    }))
}

/// `K(r) = J_1(2r) / (pi r)` with `K(0) = 1/pi`.
pub fn jinc_profile(r: f64) -> f64 {
    if r.abs() < 1e-8 {
        // J_1(x)/x = 1/2 - x^2/16 + ...
        (1.0 - r * r / 2.0) / PI
    } else {
        bessel_j1(2.0 * r) / (PI * r)
    }
}

/// `K(r) = sin(r) / (pi r)` with `K(0) = 1/pi`.
pub fn sinc_profile(r: f64) -> f64 {
    if r.abs() < 1e-8 {
        (1.0 - r * r / 6.0) / PI
    } else {
        r.sin() / (PI * r)
    }
}

fn radial_kernel(d: usize, family: &str, profile: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Kernel {
    let descriptor = Descriptor::new(family)
        .param("d", d as f64)
        .symmetry(Symmetry::RadialModulus)
        .intensity(1.0 / PI)
        .projection(true);
    Kernel::new(GroundSpace::Euclidean(d), descriptor, move |v, w| {
        Complex64::new(profile(distance(v.coords(), w.coords())), 0.0)
    })
}

/// Most repulsive stationary kernel with intensity `1/pi`: the inverse Fourier
/// transform of the indicator of a ball. Closed forms for `d = 1` (sinc) and `d = 2` (jinc).
pub fn jinc_kernel(d: usize) -> Result<Kernel> {
    match d {
        1 => Ok(radial_kernel(1, "sinc", sinc_profile)),
        2 => Ok(radial_kernel(2, "jinc", jinc_profile)),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Radius of the frequency ball whose volume is `1/pi` in dimension `d`.
pub fn fourier_ball_radius(d: usize) -> Result<f64> {
    let df = d as f64;
    Ok((df * gamma_fn(df / 2.0)? / (2.0 * PI.powf(1.0 + df / 2.0))).powf(1.0 / df))
}

/// Volume of the ball of radius `r` in `R^k`.
fn ball_volume(k: usize, r: f64) -> f64 {
    let h = k as f64 / 2.0;
    PI.powf(h) / statrs::function::gamma::gamma(h + 1.0) * r.powi(k as i32)
}

/// The same kernel in any dimension, evaluated by quadrature over the ball:
/// `K(r) = 2 int_0^(pi/2) cos(2 pi r R sin phi) V_(d-1)(R cos phi) R cos phi dphi`.
/// Slow; meant for cross-checks.
pub fn jinc_kernel_quadrature(d: usize) -> Result<Kernel> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    let radius = fourier_ball_radius(d)?;
    let spec = QuadratureSpec::default().with_relative_tolerance(1e-12);
    let profile = move |r: f64| {
        let f = |phi: f64| {
            let (s, c) = phi.sin_cos();
            (2.0 * PI * r * radius * s).cos() * ball_volume(d - 1, radius * c) * radius * c
        };
        integrate(f, 0.0, PI / 2.0, &spec).map(|i| 2.0 * i.value).unwrap_or(f64::NAN)
    };
    Ok(radial_kernel(d, "jinc-quadrature", profile))
}

/// Independent thinning with retention `alpha beta` followed by rescaling by `beta^(1/d)`:
/// `K'(v, w) = alpha K(v / beta^(1/d), w / beta^(1/d))`.
pub fn thin_rescale(k: &Kernel, alpha: f64, beta: f64) -> Result<Kernel> {
    let GroundSpace::Euclidean(d) = k.space() else {
        return Err(Error::InvalidInput("thin-and-rescale needs a Euclidean kernel".into()));
    };
    if !(beta.is_finite() && beta > 0.0 && beta <= 1.0) {
        return Err(Error::ParamBound(format!("beta must lie in (0, 1], got {beta}")));
    }
    if !(alpha.is_finite() && alpha > 0.0 && alpha * beta <= 1.0 + 1e-12) {
        return Err(Error::ParamBound(format!("alpha must lie in (0, 1/beta], got {alpha}")));
    }
    let scale = beta.powf(-1.0 / d as f64);
    let base = k.clone();
    let old = k.descriptor();
    let mut descriptor = Descriptor::new(format!("thinned-{}", old.family))
        .param("alpha", alpha)
        .param("beta", beta)
        .symmetry(old.symmetry)
        .projection(old.projection && (alpha * beta - 1.0).abs() < 1e-12);
    descriptor.params.extend(old.params.iter().cloned());
    if let Some(rho) = old.intensity {
        descriptor = descriptor.intensity(alpha * rho);
    }
    let shrink = move |p: &Point| Point::Euclidean(p.coords().iter().map(|x| x * scale).collect());
    Ok(Kernel::new(GroundSpace::Euclidean(d), descriptor, move |v, w| {
        base.eval(&shrink(v), &shrink(w)) * alpha
    }))
}

/// Displacement density of the thinned and rescaled planar jinc kernel:
/// `f_u(v) = J_1(2r / sqrt(beta))^2 / (pi r^2)` with `r = |v - u|`.
pub fn thinned_jinc_density(r: f64, beta: f64) -> f64 {
    let s = beta.sqrt();
    let k = jinc_profile(r / s) / s;
    PI * k * k
}

/// Diagonal kernel on `{1, ..., n}`: independent sites, no repulsion.
pub fn diagonal_kernel(values: &[f64]) -> Result<Kernel> {
    if values.iter().any(|v| !(v.is_finite() && (0.0..=1.0).contains(v))) {
        return Err(Error::ParamBound("diagonal entries must lie in [0, 1]".into()));
    }
    let n = values.len();
    let m = crate::numerics::CMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { values[i] } else { 0.0 }, 0.0));
    let k = Kernel::from_matrix(m, "diagonal")?;
    let descriptor = k.descriptor().clone().projection(values.iter().all(|&v| v == 0.0 || v == 1.0));
    Ok(k.with_descriptor(descriptor))
}
