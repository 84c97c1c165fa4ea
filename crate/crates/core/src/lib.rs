//! Reduced Palm distributions of determinantal point processes.
//!
//! For a DPP with kernel `K` and a point `u` with `K(u,u) > 0`, the reduced
//! Palm process is again determinantal, with kernel
//! `K^u(v,w) = K(v,w) - K(v,u) K(u,w) / K(u,u)`. The original process can be
//! coupled with it so that it contains the Palm process plus at most one
//! extra point. That point is present with probability
//! `p_u = int |K(u,v)|^2 dv / K(u,u)` and, when present, has density
//! `f_u(v) = |K(u,v)|^2 / int |K(u,w)|^2 dw`.
//!
//! Modules:
//! - [`numerics`]: special functions, Hermitian linear algebra, quadrature.
//! - [`kernel`]: kernels on finite, Euclidean and spherical spaces, Palm kernels, `p_u` and `f_u`.
//! - [`finite`]: exact laws, samplers, dilations and couplings on finite spaces.
//! - [`models`]: Ginibre, jinc/sinc, thinned and spherical kernels.
//! - [`analysis`]: displacement moments, radial profiles, grid discretization, Monte Carlo checks.

pub mod analysis;
pub mod error;
pub mod finite;
pub mod kernel;
pub mod models;
pub mod numerics;

pub use error::{Error, Result};
pub use finite::{CouplingTable, FiniteDpp, SubsetLaw, XiLaw};
pub use kernel::{Descriptor, GroundSpace, Kernel, Point, RepulsivenessReport, Symmetry};
pub use models::{GinibreParams, SphereModel};
pub use numerics::{CMatrix, QuadratureSpec};
