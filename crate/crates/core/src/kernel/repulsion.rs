//! The coupling probability `p_u` and the displacement density `f_u`.

use super::palm::anchor_intensity;
use super::{dot, GroundSpace, Kernel, Point, Symmetry};
use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, integrate, integrate_radial, sphere_area, QuadratureSpec};
use std::f64::consts::PI;

/// Where a profile value was evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileCoord {
    Site(usize),
    /// Euclidean distance from the anchor.
    Radius(f64),
    /// Geodesic angle from the anchor on a sphere.
    Angle(f64),
}

impl ProfileCoord {
    pub fn value(&self) -> f64 {
        match *self {
            ProfileCoord::Site(i) => i as f64,
            ProfileCoord::Radius(r) | ProfileCoord::Angle(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepulsivenessReport {
    pub anchor: Point,
    pub p_u: f64,
    /// `||K(u, .)||^2` in `L^2` of the reference measure.
    pub norm_sq: f64,
    /// Absolute error estimate on `p_u` (quadrature plus tail).
    pub quadrature_error: f64,
    /// Extrapolated mass of `p_u` beyond the truncation radius.
    pub tail_estimate: f64,
    /// `f_u = |K(u, .)|^2 / norm_sq` on a model-dependent grid.
    pub density_profile: Vec<(ProfileCoord, f64)>,
}

const CONTRACTION_SLACK: f64 = 1e-6;
const RADIAL_PROFILE_STEP: f64 = 0.25;
const RADIAL_PROFILE_POINTS: usize = 41;
const ANGLE_PROFILE_POINTS: usize = 41;

/// `p_u = int |K(u, v)|^2 dnu(v) / K(u, u)` together with a profile of `f_u`.
///
/// Finite spaces sum exactly. Euclidean kernels must declare
/// [`Symmetry::RadialModulus`] and are integrated along a ray with the power
/// law tail extrapolation of [`integrate_radial`]. Sphere kernels must declare
/// [`Symmetry::SphereIsotropic`] and are integrated over the polar angle.
pub fn repulsiveness_p(k: &Kernel, u: &Point, spec: &QuadratureSpec) -> Result<RepulsivenessReport> {
    spec.validate()?;
    let kuu = anchor_intensity(k, u)?;
    let mut report = match k.space() {
        GroundSpace::Finite(n) => finite(k, u, n),
        GroundSpace::Euclidean(d) => euclidean(k, u, d, spec)?,
        GroundSpace::Sphere(d) => sphere(k, u, d, spec)?,
    };
    report.p_u = report.norm_sq / kuu;
    report.quadrature_error /= kuu;
    report.tail_estimate /= kuu;
    if report.p_u > 1.0 + CONTRACTION_SLACK {
        return Err(Error::InvalidKernel(report.p_u));
    }
    Ok(report)
}

fn empty(u: &Point) -> RepulsivenessReport {
    RepulsivenessReport {
        anchor: u.clone(),
        p_u: 0.0,
        norm_sq: 0.0,
        quadrature_error: 0.0,
        tail_estimate: 0.0,
        density_profile: Vec::new(),
    }
}

fn normalised(value: f64, norm_sq: f64) -> f64 {
    if norm_sq > 0.0 {
        value / norm_sq
    } else {
        0.0
    }
}

fn finite(k: &Kernel, u: &Point, n: usize) -> RepulsivenessReport {
    let row: Vec<f64> = (1..=n).map(|v| k.eval(u, &Point::Site(v)).norm_sqr()).collect();
    let norm_sq: f64 = row.iter().sum();
    let mut report = empty(u);
    report.norm_sq = norm_sq;
    report.density_profile = row
        .iter()
        .enumerate()
        .map(|(i, &m)| (ProfileCoord::Site(i + 1), normalised(m, norm_sq)))
        .collect();
    report
}

fn euclidean(k: &Kernel, u: &Point, d: usize, spec: &QuadratureSpec) -> Result<RepulsivenessReport> {
    if k.descriptor().symmetry != Symmetry::RadialModulus {
        return Err(Error::NotIsotropic(format!(
            "'{}' kernel on R^{d} does not declare a radial modulus",
            k.descriptor().family
        )));
    }
    let base = u.coords().to_vec();
    let along = |r: f64| {
        let mut x = base.clone();
        x[0] += r;
        k.eval(u, &Point::Euclidean(x)).norm_sqr()
    };
    // surface area of the unit sphere S^(d-1)
    let shell = 2.0 * PI.powf(d as f64 / 2.0) / gamma_fn(d as f64 / 2.0)?;
    let radial = integrate_radial(|r| shell * r.powi(d as i32 - 1) * along(r), spec)?;
    let mut report = empty(u);
    report.norm_sq = radial.value;
    report.quadrature_error = radial.abs_error;
    report.tail_estimate = radial.tail_estimate;
    report.density_profile = (0..RADIAL_PROFILE_POINTS)
        .map(|j| {
            let r = j as f64 * RADIAL_PROFILE_STEP;
            (ProfileCoord::Radius(r), normalised(along(r), radial.value))
        })
        .collect();
    Ok(report)
}

/// A unit vector orthogonal to `u`.
pub(crate) fn orthogonal_unit(u: &[f64]) -> Vec<f64> {
    let axis = (0..u.len())
        .min_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()))
        .expect("sphere points have coordinates");
    let mut w: Vec<f64> = (0..u.len()).map(|i| if i == axis { 1.0 } else { 0.0 }).collect();
    let proj = dot(&w, u);
    for (wi, ui) in w.iter_mut().zip(u) {
        *wi -= proj * ui;
    }
    let norm = dot(&w, &w).sqrt();
    w.iter().map(|x| x / norm).collect()
}

/// The point at geodesic angle `theta` from `u` along the great circle through `w`.
pub(crate) fn geodesic_point(u: &[f64], w: &[f64], theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::Sphere(u.iter().zip(w).map(|(a, b)| c * a + s * b).collect())
}

fn sphere(k: &Kernel, u: &Point, d: usize, spec: &QuadratureSpec) -> Result<RepulsivenessReport> {
    if k.descriptor().symmetry != Symmetry::SphereIsotropic {
        return Err(Error::NotIsotropic(format!(
            "'{}' kernel on S^{d} is not declared isotropic",
            k.descriptor().family
        )));
    }
    let uc = u.coords();
    let w = orthogonal_unit(uc);
    let along = |theta: f64| k.eval(u, &geodesic_point(uc, &w, theta)).norm_sqr();
    let latitude = sphere_area(d - 1);
    let integral = integrate(
        |t| latitude * t.sin().powi(d as i32 - 1) * along(t),
        0.0,
        PI,
        spec,
    )?;
    let mut report = empty(u);
    report.norm_sq = integral.value;
    report.quadrature_error = integral.abs_error;
    report.density_profile = (0..ANGLE_PROFILE_POINTS)
        .map(|j| {
            let theta = j as f64 * PI / (ANGLE_PROFILE_POINTS - 1) as f64;
            (ProfileCoord::Angle(theta), normalised(along(theta), integral.value))
        })
        .collect();
    Ok(report)
}
