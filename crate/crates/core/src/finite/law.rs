//! Exact laws over subsets.

use super::FiniteDpp;
use crate::error::{Error, Result};
use crate::numerics::linalg::determinant;
use crate::numerics::CMatrix;
use num_complex::Complex64;

/// Largest ground set for which [`subset_law`] enumerates all subsets.
pub const MAX_LAW_SITES: usize = 16;

/// Probability of every subset of `{1, ..., n}`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetLaw {
    n: usize,
    probabilities: Vec<f64>,
}

impl SubsetLaw {
    /// Builds a law from `2^n` probabilities; entries down to `-1e-12` are clamped to zero.
    pub fn new(n: usize, probabilities: Vec<f64>) -> Result<SubsetLaw> {
        if n > MAX_LAW_SITES {
            return Err(Error::SizeGuard {
                what: "subset law sites",
                size: n,
                max: MAX_LAW_SITES,
            });
        }
        if probabilities.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "law on {n} sites needs {} entries, got {}",
                1usize << n,
                probabilities.len()
            )));
        }
        let mut probabilities = probabilities;
        for p in probabilities.iter_mut() {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::InvalidInput(format!("invalid probability {p}")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("total mass {total} differs from 1")));
        }
        Ok(SubsetLaw { n, probabilities })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, mask: usize) -> f64 {
        self.probabilities.get(mask).copied().unwrap_or(0.0)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `(mask, probability)` for subsets of positive mass.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probabilities.iter().copied().enumerate().filter(|&(_, p)| p > 0.0)
    }

    /// `P(A subset of X)`.
    pub fn inclusion(&self, a: usize) -> f64 {
        self.support().filter(|&(s, _)| s & a == a).map(|(_, p)| p).sum()
    }

    /// Law of the number of points.
    pub fn count_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        for (s, p) in self.support() {
            out[s.count_ones() as usize] += p;
        }
        out
    }
}

/// `P(X = S) = (-1)^|S^c| det(K - I_{S^c})` for every subset `S`.
pub fn subset_law(dpp: &FiniteDpp) -> Result<SubsetLaw> {
    let n = dpp.n();
    if n > MAX_LAW_SITES {
        return Err(Error::SizeGuard {
            what: "subset law sites",
            size: n,
            max: MAX_LAW_SITES,
        });
    }
    let k = dpp.matrix();
    let full = (1usize << n) - 1;
    let mut probabilities = Vec::with_capacity(1 << n);
    let mut work: CMatrix = k.clone();
    for s in 0..=full {
        let complement = full & !s;
        for i in 0..n {
            work[(i, i)] = k[(i, i)] - Complex64::new(if complement >> i & 1 == 1 { 1.0 } else { 0.0 }, 0.0);
        }
        let det = determinant(&work).re;
        let sign = if complement.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        probabilities.push((sign * det).max(0.0));
    }
    SubsetLaw::new(n, probabilities)
}
