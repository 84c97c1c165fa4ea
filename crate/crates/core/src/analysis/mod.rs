//! Displacement moments, radial profiles and Monte Carlo checks on discretized models.

mod grid;
mod moments;

pub use grid::{
    chi_square_test, grid_discretize, mc_validate_coupling, GridModel, McCouplingReport, Window,
    GRID_SPECTRUM_TOLERANCE, MAX_GRID_SITES, MIN_EXPECTED_PER_BIN,
};
pub use moments::{
    ginibre_moment, jinc_moment_closed, moment_quadrature, radial_profile, radial_tail_mass, MomentResult, RadialProfile,
};
