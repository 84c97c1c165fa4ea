use thiserror::Error;

/// Errors raised by the library.
///
/// Validation failures carry enough context for a caller (the CLI, mostly) to
/// name the violated condition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    Pole(f64),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("eigenvalue {eigenvalue:.6e} outside the admissible range [{lower}, {upper}]")]
    Spectrum {
        eigenvalue: f64,
        lower: f64,
        upper: f64,
    },

    #[error("discretized spectrum reaches {eigenvalue:.6e}: grid too coarse, shrink the cells by raising the resolution")]
    CoarseGrid { eigenvalue: f64 },

    #[error("materially negative eigenvalue {0:.6e}")]
    NegativeEigenvalue(f64),

    #[error("parameter bound violated: {0}")]
    ParamBound(String),

    #[error("existence bound violated: intensity {rho} exceeds {bound}")]
    ExistenceBound { rho: f64, bound: f64 },

    #[error("negative joint intensity {0:.6e}: kernel is not positive semidefinite")]
    NegativeDeterminant(f64),

    #[error("vanishing intensity {0:.3e} at the anchor")]
    VanishingIntensity(f64),

    #[error("p_u = {0} exceeds 1: kernel violates the contraction bound")]
    InvalidKernel(f64),

    #[error("kernel does not declare the symmetry needed here: {0}")]
    NotIsotropic(String),

    #[error("quadrature did not converge: estimated error {error:.3e} after {subdivisions} subdivisions")]
    NonConvergence { error: f64, subdivisions: usize },

    #[error("integral diverges (fitted tail exponent {exponent:.4})")]
    Divergent { exponent: f64 },

    #[error("size guard: {what} is {size}, maximum {max}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("point does not belong to the ground space: {0}")]
    PointMismatch(String),

    #[error("site mismatch: {0}")]
    SiteMismatch(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coupling infeasible: max flow {max_flow:.12} < 1")]
    TheoremViolation { max_flow: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
