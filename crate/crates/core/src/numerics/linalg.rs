//! Dense Hermitian linear algebra on `nalgebra` complex matrices.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Spectral decomposition `K = V diag(lambda) V*` with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// Rebuild `V diag(f(lambda)) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for k in 0..n {
            let s = f(self.eigenvalues[k]);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|l| l)
    }
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |K - K*|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn require_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Average `K` with its adjoint.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(k: &CMatrix) -> Result<HermitianEig> {
    require_square(k)?;
    let dev = hermitian_deviation(k);
    if dev > 1e-9 * (1.0 + max_abs(k)) {
        return Err(Error::NonHermitian { deviation: dev });
    }
    let n = k.nrows();
    if n == 0 {
        return Ok(HermitianEig {
            eigenvalues: DVector::zeros(0),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = symmetrize(k).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues down to `-1e-6` are treated as rounding noise and clamped to zero.
pub fn psd_sqrt(k: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(k)?;
    if let Some(&min) = eig.eigenvalues.iter().last() {
        if min < -1e-6 {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    Ok(symmetrize(&eig.apply(|l| l.max(0.0).sqrt())))
}

/// Determinant of a (small) complex matrix.
pub fn determinant(m: &CMatrix) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}
