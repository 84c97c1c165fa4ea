//! Parametric kernel families.

mod euclidean;
mod sphere;

pub use euclidean::{
    diagonal_kernel, fourier_ball_radius, ginibre_kernel, jinc_kernel, jinc_kernel_quadrature, jinc_profile,
    sinc_profile, thin_rescale, thinned_jinc_density, GinibreParams,
};
pub use sphere::{
    multiplicity, multiquadric, multiquadric_comparison, multiquadric_k0, multiquadric_p_closed,
    multiquadric_p_without_multiplicity, multiquadric_truncation, sphere_kernel, sphere_model, sphere_p,
    CoefficientTail, MultiquadricComparison, SphereModel, SphereP, DISCREPANCY_THRESHOLD,
};
