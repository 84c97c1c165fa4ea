//! Joint intensities, the reduced Palm transform and pointwise repulsion measures.

use super::{Kernel, Point};
use crate::error::{Error, Result};
use crate::numerics::linalg::determinant;

/// Largest point tuple accepted by [`joint_intensity`].
pub const MAX_JOINT_POINTS: usize = 12;

const VANISHING: f64 = 1e-12;

pub(crate) fn anchor_intensity(k: &Kernel, u: &Point) -> Result<f64> {
    k.space().check(u)?;
    let kuu = k.intensity_at(u);
    if !(kuu > VANISHING) {
        return Err(Error::VanishingIntensity(kuu));
    }
    Ok(kuu)
}

/// `det{K(u_i, u_j)}`.
pub fn joint_intensity(k: &Kernel, points: &[Point]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidInput("joint intensity needs at least one point".into()));
    }
    if points.len() > MAX_JOINT_POINTS {
        return Err(Error::SizeGuard {
            what: "point tuple",
            size: points.len(),
            max: MAX_JOINT_POINTS,
        });
    }
    for p in points {
        k.space().check(p)?;
    }
    let det = determinant(&k.gram(points)).re;
    if det < -1e-10 {
        return Err(Error::NegativeDeterminant(det));
    }
    Ok(det.max(0.0))
}

/// `g(u, v) = 1 - |K(u, v)|^2 / (K(u, u) K(v, v))`, with `0/0 = 0`.
pub fn pair_correlation(k: &Kernel, u: &Point, v: &Point) -> f64 {
    let kuu = k.intensity_at(u);
    let kvv = k.intensity_at(v);
    if !(kuu > 0.0 && kvv > 0.0) {
        return 0.0;
    }
    1.0 - k.eval(u, v).norm_sqr() / (kuu * kvv)
}

/// Kernel of the reduced Palm process at `u`:
/// `K^u(v, w) = K(v, w) - K(v, u) K(u, w) / K(u, u)`.
pub fn palm_kernel(k: &Kernel, u: &Point) -> Result<Kernel> {
    let kuu = anchor_intensity(k, u)?;
    let base = k.clone();
    let anchor = u.clone();
    let mut descriptor = k.descriptor().clone();
    descriptor.symmetry = super::Symmetry::General;
    descriptor.intensity = None;
    descriptor.anchor = Some(u.clone());
    Ok(Kernel::new(k.space(), descriptor, move |v, w| {
        base.eval(v, w) - base.eval(v, &anchor) * base.eval(&anchor, w) / kuu
    }))
}

/// `rho_u(v) = |K(u, v)|^2 / K(u, u)`, the intensity of the displaced point.
pub fn displacement_intensity(k: &Kernel, u: &Point, v: &Point) -> Result<f64> {
    let kuu = anchor_intensity(k, u)?;
    k.space().check(v)?;
    Ok(k.eval(u, v).norm_sqr() / kuu)
}

/// `(rho(v), rho^u(v))`; the Palm intensity never exceeds the original one.
pub fn palm_intensity_dominated(k: &Kernel, u: &Point, v: &Point) -> Result<(f64, f64)> {
    let kuu = anchor_intensity(k, u)?;
    k.space().check(v)?;
    let rho = k.intensity_at(v);
    let palm = rho - k.eval(v, u).norm_sqr() / kuu;
    Ok((rho, palm.max(0.0)))
}
