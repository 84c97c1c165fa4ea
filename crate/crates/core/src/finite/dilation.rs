//! The projection dilation `Q = [[K, L], [L, I - K]]` with `L = sqrt(K(I - K))`.

use super::FiniteDpp;
use crate::error::Result;
use crate::numerics::linalg::symmetrize;
use crate::numerics::CMatrix;
use nalgebra::DVector;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct DilationPair {
    pub q: CMatrix,
    /// `(K e_u, L e_u) / sqrt(K_uu)`, a unit eigenvector of `Q` for eigenvalue 1.
    pub psi_u: DVector<Complex64>,
    /// `Q - psi_u psi_u*`.
    pub q_u: CMatrix,
}

impl DilationPair {
    /// Upper-left `n x n` block of `Q_u`.
    pub fn compression(&self) -> CMatrix {
        let n = self.q.nrows() / 2;
        self.q_u.view((0, 0), (n, n)).into_owned()
    }
}

/// `L = V sqrt(lambda (1 - lambda)) V*`, built from the spectral data of `K` itself.
///
/// Eigenvalues within rounding of 0 or 1 contribute nothing, so projections get `L = 0` exactly.
fn defect(dpp: &FiniteDpp) -> CMatrix {
    symmetrize(&dpp.eig().apply(|l| {
        let v = l * (1.0 - l);
        if v < DEFECT_FLOOR {
            0.0
        } else {
            v.sqrt()
        }
    }))
}

const DEFECT_FLOOR: f64 = 1e-13;

fn assemble(k: &CMatrix, l: &CMatrix) -> CMatrix {
    let n = k.nrows();
    let mut q = CMatrix::zeros(2 * n, 2 * n);
    let id = CMatrix::identity(n, n);
    q.view_mut((0, 0), (n, n)).copy_from(k);
    q.view_mut((0, n), (n, n)).copy_from(l);
    q.view_mut((n, 0), (n, n)).copy_from(l);
    q.view_mut((n, n), (n, n)).copy_from(&(id - k));
    q
}

/// The `2n x 2n` orthogonal projection whose upper-left block is `K`.
pub fn dilate(dpp: &FiniteDpp) -> Result<CMatrix> {
    Ok(assemble(dpp.matrix(), &defect(dpp)))
}

/// Dilation together with the unit eigenvector attached to site `u`.
pub fn palm_eigenvector(dpp: &FiniteDpp, u: usize) -> Result<DilationPair> {
    let (i, kuu) = dpp.anchor_diag(u)?;
    let n = dpp.n();
    let l = defect(dpp);
    let q = assemble(dpp.matrix(), &l);
    let scale = kuu.sqrt();
    let psi_u = DVector::from_fn(2 * n, |r, _| {
        if r < n {
            dpp.matrix()[(r, i)] / scale
        } else {
            l[(r - n, i)] / scale
        }
    });
    let q_u = &q - &psi_u * psi_u.adjoint();
    Ok(DilationPair { q, psi_u, q_u })
}
