//! Determinantal processes on `{1, ..., n}` with counting measure.
//!
//! Subsets are bitmasks: bit `i` stands for site `i + 1`.

mod coupling;
mod dilation;
mod law;
mod sampling;

pub use coupling::{coupling_feasible, sample_coupled, xi_law, CouplingTable, XiLaw, MAX_COUPLING_SITES};
pub use dilation::{dilate, palm_eigenvector, DilationPair};
pub use law::{subset_law, SubsetLaw, MAX_LAW_SITES};
pub use sampling::{
    sample_coupled_many, sample_exact, sample_exact_many, sample_spectral, sample_spectral_many, sites_to_mask,
};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::numerics::linalg::{determinant, hermitian_deviation};
use crate::numerics::{hermitian_eig, CMatrix, HermitianEig};

/// Spectrum slack accepted by [`FiniteDpp::validate`].
pub const SPECTRUM_TOLERANCE: f64 = 1e-6;
const HERMITIAN_TOLERANCE: f64 = 1e-10;
const VANISHING: f64 = 1e-12;

/// Hermitian kernel matrix with spectrum in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct FiniteDpp {
    matrix: CMatrix,
    eig: HermitianEig,
    clamped: Vec<f64>,
}

impl FiniteDpp {
    /// Accepts eigenvalues in `[-1e-6, 1 + 1e-6]` and clamps them into `[0, 1]`.
    pub fn validate(matrix: CMatrix) -> Result<FiniteDpp> {
        Self::validate_with_tolerance(matrix, SPECTRUM_TOLERANCE)
    }

    /// As [`FiniteDpp::validate`] with a caller-chosen spectrum slack.
    pub fn validate_with_tolerance(matrix: CMatrix, tolerance: f64) -> Result<FiniteDpp> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidInput("empty kernel matrix".into()));
        }
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian { deviation: dev });
        }
        let mut eig = hermitian_eig(&matrix)?;
        let (lower, upper) = (-tolerance, 1.0 + tolerance);
        let mut clamped = Vec::new();
        for l in eig.eigenvalues.iter_mut() {
            if *l < lower || *l > upper {
                return Err(Error::Spectrum {
                    eigenvalue: *l,
                    lower,
                    upper,
                });
            }
            if *l < 0.0 || *l > 1.0 {
                clamped.push(*l);
                *l = l.clamp(0.0, 1.0);
            }
        }
        let matrix = if clamped.is_empty() {
            crate::numerics::linalg::symmetrize(&matrix)
        } else {
            crate::numerics::linalg::symmetrize(&eig.reconstruct())
        };
        Ok(FiniteDpp { matrix, eig, clamped })
    }

    /// Restricts a kernel on a finite space to its matrix and validates it.
    pub fn from_kernel(k: &Kernel) -> Result<FiniteDpp> {
        let m = k
            .to_matrix()
            .ok_or_else(|| Error::InvalidInput("kernel is not on a finite space".into()))?;
        Self::validate(m)
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eig(&self) -> &HermitianEig {
        &self.eig
    }

    /// Original values of eigenvalues that were clamped into `[0, 1]`.
    pub fn clamped(&self) -> &[f64] {
        &self.clamped
    }

    /// All eigenvalues are 0 or 1 (within `1e-9`).
    pub fn is_projection(&self) -> bool {
        self.eig.eigenvalues.iter().all(|&l| l < 1e-9 || l > 1.0 - 1e-9)
    }

    /// Expected number of points, `tr K`.
    pub fn expected_count(&self) -> f64 {
        (0..self.n()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Kernel view over `{1, ..., n}`.
    pub fn kernel(&self) -> Kernel {
        Kernel::from_matrix(self.matrix.clone(), "finite").expect("validated matrix is square")
    }

    pub(crate) fn check_site(&self, u: usize) -> Result<usize> {
        if u == 0 || u > self.n() {
            return Err(Error::SiteMismatch(format!("site {u} outside 1..={}", self.n())));
        }
        Ok(u - 1)
    }

    pub(crate) fn anchor_diag(&self, u: usize) -> Result<(usize, f64)> {
        let i = self.check_site(u)?;
        let kuu = self.matrix[(i, i)].re;
        if !(kuu > VANISHING) {
            return Err(Error::VanishingIntensity(kuu));
        }
        Ok((i, kuu))
    }
}

pub(crate) fn mask_sites(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

/// Principal submatrix on the sites of `mask`.
pub(crate) fn principal(m: &CMatrix, mask: usize) -> CMatrix {
    let idx: Vec<usize> = mask_sites(mask).collect();
    CMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

/// `P(A subset of X) = det K_A`, clamped to `[0, 1]`.
pub fn inclusion_prob(dpp: &FiniteDpp, mask: usize) -> Result<f64> {
    if dpp.n() < usize::BITS as usize && mask >> dpp.n() != 0 {
        return Err(Error::SiteMismatch(format!("subset {mask:#b} exceeds {} sites", dpp.n())));
    }
    Ok(determinant(&principal(&dpp.matrix, mask)).re.clamp(0.0, 1.0))
}

/// Kernel of the reduced Palm process at site `u`: `K - K_{.u} K_{u.} / K_uu`.
pub fn palm_matrix(dpp: &FiniteDpp, u: usize) -> Result<FiniteDpp> {
    let (i, kuu) = dpp.anchor_diag(u)?;
    let k = &dpp.matrix;
    let col = k.column(i).into_owned();
    let row = k.row(i).into_owned();
    let mut palm = k - (&col * &row).unscale(kuu);
    // exact zeros on the anchor row and column
    for j in 0..dpp.n() {
        palm[(i, j)] = num_complex::Complex64::new(0.0, 0.0);
        palm[(j, i)] = num_complex::Complex64::new(0.0, 0.0);
    }
    FiniteDpp::validate(palm)
}

/// `p_u = sum_v |K_uv|^2 / K_uu = (K^2)_uu / K_uu`.
pub fn p_u_finite(dpp: &FiniteDpp, u: usize) -> Result<f64> {
    let (i, kuu) = dpp.anchor_diag(u)?;
    let s: f64 = dpp.matrix.row(i).iter().map(|z| z.norm_sqr()).sum();
    Ok((s / kuu).clamp(0.0, 1.0))
}

/// `f_u(v) = |K_uv|^2 / sum_w |K_uw|^2` for `v = 1..=n` (all zero when the row vanishes).
pub fn f_u_finite(dpp: &FiniteDpp, u: usize) -> Result<Vec<f64>> {
    let i = dpp.check_site(u)?;
    let row: Vec<f64> = dpp.matrix.row(i).iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = row.iter().sum();
    Ok(row.iter().map(|m| if total > 0.0 { m / total } else { 0.0 }).collect())
}
