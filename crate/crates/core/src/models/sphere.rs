//! Isotropic kernels on the sphere `S^d`.
//!
//! An isotropic kernel is `K(u, v) = K0(u . v)` with the Schoenberg expansion
//! `K0(t) = rho sum_l beta_l C_l(t) / C_l(1)`, where `C_l` is the Gegenbauer
//! polynomial of index `(d-1)/2` (Chebyshev on the circle) and the `beta_l`
//! form a probability sequence. The eigenvalues are
//! `lambda_l = rho sigma_d beta_l / m_l` with multiplicity `m_l`.

use crate::error::{Error, Result};
use crate::kernel::{dot, Descriptor, GroundSpace, Kernel, Symmetry};
use crate::numerics::{gegenbauer_ratios, sphere_area};
use num_complex::Complex64;
use std::f64::consts::PI;

/// What is known about the coefficients beyond the truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientTail {
    /// The listed coefficients are all of them.
    None,
    /// `beta_(l+1) = ratio * beta_l` for every `l >= L_max`.
    Geometric { ratio: f64 },
    /// Only the remaining mass `1 - sum beta_l` is known.
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereModel {
    pub d: usize,
    pub rho: f64,
    /// `beta_0, ..., beta_(L_max)`.
    pub beta: Vec<f64>,
    pub tail: CoefficientTail,
    pub multiplicities: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// `1 - sum beta_l` over the listed coefficients.
    pub tail_mass: f64,
}

/// Dimension of the degree-`l` spherical harmonics on `S^d`.
pub fn multiplicity(l: usize, d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => {
            if l == 0 {
                1.0
            } else {
                2.0
            }
        }
        _ => {
            let lf = l as f64;
            let df = d as f64;
            // C(l + d - 2, d - 2)
            let binom: f64 = (1..=d - 2).map(|j| (lf + j as f64) / j as f64).product();
            (2.0 * lf + df - 1.0) / (df - 1.0) * binom
        }
    }
}

const MASS_TOLERANCE: f64 = 1e-9;

/// Validates coefficients and the existence bound `rho <= inf m_l / (sigma_d beta_l)`.
pub fn sphere_model(d: usize, rho: f64, beta: Vec<f64>, tail: CoefficientTail) -> Result<SphereModel> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::ParamBound(format!("intensity must be positive, got {rho}")));
    }
    if beta.is_empty() {
        return Err(Error::InvalidInput("no Schoenberg coefficients".into()));
    }
    if let Some(b) = beta.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(Error::ParamBound(format!("coefficient {b} is negative or not finite")));
    }
    let sum: f64 = beta.iter().sum();
    let l_max = beta.len() - 1;
    let implied_tail = match tail {
        CoefficientTail::None => 0.0,
        CoefficientTail::Geometric { ratio } => {
            if !(0.0..1.0).contains(&ratio) {
                return Err(Error::ParamBound(format!("geometric ratio must lie in [0, 1), got {ratio}")));
            }
            beta[l_max] * ratio / (1.0 - ratio)
        }
        CoefficientTail::Unknown => (1.0 - sum).max(0.0),
    };
    if (sum + implied_tail - 1.0).abs() > MASS_TOLERANCE || sum > 1.0 + MASS_TOLERANCE {
        return Err(Error::ParamBound(format!(
            "coefficients sum to {} (listed {sum}), expected 1",
            sum + implied_tail
        )));
    }
    let sigma = sphere_area(d);
    let multiplicities: Vec<f64> = (0..=l_max).map(|l| multiplicity(l, d)).collect();
    let bound = beta
        .iter()
        .zip(&multiplicities)
        .filter(|(b, _)| **b > 0.0)
        .map(|(b, m)| m / (sigma * b))
        .fold(f64::INFINITY, f64::min);
    if rho > bound * (1.0 + 1e-12) {
        return Err(Error::ExistenceBound { rho, bound });
    }
    let eigenvalues = beta
        .iter()
        .zip(&multiplicities)
        .map(|(b, m)| (rho * sigma * b / m).min(1.0))
        .collect();
    Ok(SphereModel {
        d,
        rho,
        beta,
        tail,
        multiplicities,
        eigenvalues,
        tail_mass: 1.0 - sum,
    })
}

impl SphereModel {
    pub fn l_max(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn sigma(&self) -> f64 {
        sphere_area(self.d)
    }

    /// `K0(t) = rho sum beta_l C_l(t) / C_l(1)` over the listed coefficients.
    pub fn k0(&self, t: f64) -> f64 {
        let ratios = gegenbauer_ratios(self.l_max(), self.d, t.clamp(-1.0, 1.0));
        self.rho * self.beta.iter().zip(&ratios).map(|(b, r)| b * r).sum::<f64>()
    }

    /// Whether every eigenvalue is 0 or 1 and no mass is left out.
    pub fn is_projection(&self) -> bool {
        self.tail == CoefficientTail::None && self.eigenvalues.iter().all(|&l| l < 1e-12 || l > 1.0 - 1e-12)
    }
}

/// Kernel evaluating the truncated Gegenbauer series.
pub fn sphere_kernel(model: &SphereModel) -> Kernel {
    let m = model.clone();
    let descriptor = Descriptor::new("sphere-coefficients")
        .param("d", m.d as f64)
        .param("rho", m.rho)
        .symmetry(Symmetry::SphereIsotropic)
        .intensity(m.rho)
        .projection(m.is_projection());
    Kernel::new(GroundSpace::Sphere(m.d), descriptor, move |u, v| {
        Complex64::new(m.k0(dot(u.coords(), v.coords())), 0.0)
    })
}

/// `p_u` from the series together with a bound on the omitted terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereP {
    /// `rho sigma_d sum_(l <= L_max) beta_l^2 / m_l`.
    pub value: f64,
    /// Upper bound on the omitted part of the series.
    pub tail_bound: f64,
    /// Set when the bound is the crude remaining-mass bound.
    pub warning: Option<String>,
}

/// `p_u = rho sigma_d sum beta_l^2 / m_l`, the same for every anchor.
pub fn sphere_p(model: &SphereModel) -> SphereP {
    let scale = model.rho * model.sigma();
    let value = scale
        * model
            .beta
            .iter()
            .zip(&model.multiplicities)
            .map(|(b, m)| b * b / m)
            .sum::<f64>();
    let next_m = multiplicity(model.l_max() + 1, model.d);
    let (tail_bound, warning) = match model.tail {
        CoefficientTail::None => (0.0, None),
        CoefficientTail::Geometric { ratio } => {
            let last = model.beta[model.l_max()];
            (scale * (last * ratio).powi(2) / (1.0 - ratio * ratio) / next_m, None)
        }
        // beta_l <= R for every omitted l and m_l >= m_(L+1)
        CoefficientTail::Unknown => (
            scale * model.tail_mass.max(0.0).powi(2) / next_m,
            Some("coefficient tail not geometric: bound uses the remaining mass only".to_string()),
        ),
    };
    SphereP {
        value,
        tail_bound,
        warning,
    }
}

/// Smallest `L` for which the multiquadric series leaves less than `1e-12` of
/// `sum beta^2` and less than `1e-10` of `K0` out.
pub fn multiquadric_truncation(delta: f64, rho: f64) -> usize {
    let mut l = 0usize;
    loop {
        let next = delta.powi(l as i32 + 1);
        let beta_sq_tail = (1.0 - delta).powi(2) * next * next / (1.0 - delta * delta);
        if (beta_sq_tail < 1e-12 && rho * next < 1e-10) || l > 100_000 {
            return l;
        }
        l += 1;
    }
}

/// Multiquadric model on `S^2`: `K0(t) = rho (1 - delta) / sqrt(1 + delta^2 - 2 delta t)`,
/// `beta_l = (1 - delta) delta^l`.
pub fn multiquadric(delta: f64, rho: f64) -> Result<(SphereModel, Kernel)> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParamBound(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::ParamBound(format!("intensity must be positive, got {rho}")));
    }
    let bound = 1.0 / (4.0 * PI * (1.0 - delta));
    if rho > bound * (1.0 + 1e-12) {
        return Err(Error::ExistenceBound { rho, bound });
    }
    let l_max = multiquadric_truncation(delta, rho);
    let beta: Vec<f64> = (0..=l_max).map(|l| (1.0 - delta) * delta.powi(l as i32)).collect();
    let model = sphere_model(2, rho, beta, CoefficientTail::Geometric { ratio: delta })?;
    let descriptor = Descriptor::new("sphere-multiquadric")
        .param("delta", delta)
        .param("rho", rho)
        .symmetry(Symmetry::SphereIsotropic)
        .intensity(rho);
    let kernel = Kernel::new(GroundSpace::Sphere(2), descriptor, move |u, v| {
        let t = dot(u.coords(), v.coords()).clamp(-1.0, 1.0);
        Complex64::new(multiquadric_k0(delta, rho, t), 0.0)
    });
    Ok((model, kernel))
}

pub fn multiquadric_k0(delta: f64, rho: f64, t: f64) -> f64 {
    // 1 + delta^2 - 2 delta t = (1 - delta)^2 + 2 delta (1 - t), exact near t = 1
    rho * (1.0 - delta) / ((1.0 - delta).powi(2) + 2.0 * delta * (1.0 - t)).sqrt()
}

/// The series value in closed form: `4 pi rho (1 - delta)^2 artanh(delta) / delta`.
pub fn multiquadric_p_closed(delta: f64, rho: f64) -> f64 {
    4.0 * PI * rho * (1.0 - delta).powi(2) * delta.atanh() / delta
}

/// `4 pi rho (1 - delta) / (1 + delta)`: the series with the multiplicities dropped.
pub fn multiquadric_p_without_multiplicity(delta: f64, rho: f64) -> f64 {
    4.0 * PI * rho * (1.0 - delta) / (1.0 + delta)
}

/// Threshold above which the two multiquadric `p_u` forms are flagged as disagreeing.
pub const DISCREPANCY_THRESHOLD: f64 = 1e-6;

/// Every available value of the multiquadric `p_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiquadricComparison {
    pub delta: f64,
    pub rho: f64,
    pub series: SphereP,
    pub series_closed_form: f64,
    pub without_multiplicity: f64,
    /// `|without_multiplicity - series| > 1e-6`.
    pub discrepancy: bool,
}

pub fn multiquadric_comparison(delta: f64, rho: f64) -> Result<MultiquadricComparison> {
    let (model, _) = multiquadric(delta, rho)?;
    let series = sphere_p(&model);
    let without_multiplicity = multiquadric_p_without_multiplicity(delta, rho);
    Ok(MultiquadricComparison {
        delta,
        rho,
        discrepancy: (without_multiplicity - series.value).abs() > DISCREPANCY_THRESHOLD,
        series_closed_form: multiquadric_p_closed(delta, rho),
        series,
        without_multiplicity,
    })
}
