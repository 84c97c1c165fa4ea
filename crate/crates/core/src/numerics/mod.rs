//! Shared numerical kernels: special functions, quadrature and Hermitian
//! eigendecomposition. Everything here is a pure function of its inputs.

pub mod linalg;
pub mod quadrature;
pub mod special;

pub use linalg::{hermitian_eig, psd_sqrt, CMatrix, HermitianEig};
pub use quadrature::{integrate, integrate_radial, Integral, QuadratureSpec, RadialIntegral, Scheme};
pub use special::{bessel_j1, gamma_fn, gegenbauer, gegenbauer_ratios, gegenbauer_sequence, sphere_area};
