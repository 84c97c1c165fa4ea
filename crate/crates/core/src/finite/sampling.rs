//! Exact samplers. Draws return sorted 1-based sites.

use super::coupling::{sample_coupled, CouplingTable};
use super::FiniteDpp;
use crate::numerics::CMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sequential sampler: visit sites in order, include site `i` with its
/// conditional probability `M_ii`, then condition `M` on the outcome by a
/// rank-one Schur update. `O(n^3)` per draw.
pub fn sample_exact(dpp: &FiniteDpp, rng: &mut impl Rng) -> Vec<usize> {
    let n = dpp.n();
    let mut m: CMatrix = dpp.matrix().clone();
    let mut out = Vec::new();
    for i in 0..n {
        let p = m[(i, i)].re.clamp(0.0, 1.0);
        let include = rng.random::<f64>() < p;
        let denom = if include { p } else { p - 1.0 };
        if include {
            out.push(i + 1);
        }
        if denom.abs() < 1e-300 || i + 1 == n {
            continue;
        }
        let col: Vec<Complex64> = (i + 1..n).map(|j| m[(j, i)]).collect();
        for (a, j) in (i + 1..n).enumerate() {
            for (b, k) in (i + 1..n).enumerate() {
                m[(j, k)] -= col[a] * col[b].conj() / denom;
            }
        }
    }
    out
}

/// `count` draws from one seeded stream.
pub fn sample_exact_many(dpp: &FiniteDpp, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_exact(dpp, &mut rng)).collect()
}

/// Spectral sampler: keep eigenvector `k` with probability `lambda_k`, then
/// draw from the projection onto the kept vectors one point at a time.
/// `O(n k^2)` per draw once the eigendecomposition is cached.
pub fn sample_spectral(dpp: &FiniteDpp, rng: &mut impl Rng) -> Vec<usize> {
    let eig = dpp.eig();
    let n = dpp.n();
    let kept: Vec<usize> = (0..n).filter(|&k| rng.random::<f64>() < eig.eigenvalues[k]).collect();
    // columns of v span the kept eigenspace
    let mut v: Vec<Vec<Complex64>> = kept
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    let mut out = Vec::with_capacity(kept.len());
    while !v.is_empty() {
        let weights: Vec<f64> = (0..n).map(|i| v.iter().map(|c| c[i].norm_sqr()).sum()).collect();
        let total: f64 = weights.iter().sum();
        let mut x = rng.random::<f64>() * total;
        let mut site = n - 1;
        for (i, w) in weights.iter().enumerate() {
            if x < *w {
                site = i;
                break;
            }
            x -= w;
        }
        out.push(site + 1);

        // eliminate the component at `site` using the column with the largest entry there
        let pivot = (0..v.len())
            .max_by(|&a, &b| v[a][site].norm().total_cmp(&v[b][site].norm()))
            .expect("nonempty basis");
        let pc = v.swap_remove(pivot);
        let pv = pc[site];
        if pv.norm() > 0.0 {
            for c in v.iter_mut() {
                let factor = c[site] / pv;
                for (ci, pi) in c.iter_mut().zip(&pc) {
                    *ci -= factor * pi;
                }
            }
        }
        // re-orthonormalise
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(v.len());
        for mut c in v.into_iter() {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&c).map(|(x, y)| x.conj() * y).sum();
                for (ci, bi) in c.iter_mut().zip(b) {
                    *ci -= proj * bi;
                }
            }
            let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-12 {
                c.iter_mut().for_each(|z| *z /= norm);
                basis.push(c);
            }
        }
        v = basis;
    }
    out.sort_unstable();
    out
}

/// `count` spectral draws from one seeded stream.
pub fn sample_spectral_many(dpp: &FiniteDpp, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_spectral(dpp, &mut rng)).collect()
}

/// `count` coupled draws `(S, T)` from one seeded stream.
pub fn sample_coupled_many(table: &CouplingTable, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_coupled(table, &mut rng)).collect()
}

/// Bitmask of a list of 1-based sites.
pub fn sites_to_mask(sites: &[usize]) -> usize {
    sites.iter().fold(0, |m, &s| m | 1 << (s - 1))
}
