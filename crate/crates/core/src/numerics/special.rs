//! Special functions: Gamma, the Bessel function `J_1`, and Gegenbauer polynomials.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Gamma function. Rejects the poles at `0, -1, -2, ...`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x == x.round()) {
        return Err(Error::Pole(x));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// Bessel function of the first kind of order one.
///
/// Ascending series near the origin, Miller's backward recurrence (normalised
/// with `J_0 + 2 sum J_2k = 1`) on the middle range and the Hankel asymptotic
/// expansion for large arguments.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 3.0 {
        j1_series(ax)
    } else if ax <= 25.0 {
        j1_miller(ax)
    } else {
        j1_asymptotic(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn j1_series(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = h;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= -h2 / (m * (m + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn j1_miller(x: f64) -> f64 {
    let start = (x + 25.0 + 6.0 * x.cbrt()).ceil() as usize;
    let start = start + (start % 2);
    let two_over_x = 2.0 / x;
    let mut next = 0.0_f64; // j_{k+1}
    let mut cur = 1e-30_f64; // j_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    let mut k = start;
    while k > 0 {
        let prev = (k as f64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        // `cur` now holds the unnormalised j_k
        if k == 1 {
            j1 = cur;
        }
        if k % 2 == 0 {
            norm += if k == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    j1 / norm
}

fn j1_asymptotic(x: f64) -> f64 {
    // a_k(1) = prod_{j=1..k} (4 - (2j-1)^2) / (k! 8^k)
    let mu = 4.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        // signs follow (-1)^{floor(k/2)} split into even (P) and odd (Q) orders
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
    }
    // cos(x - 3pi/4) = (sin x - cos x)/sqrt2, sin(x - 3pi/4) = -(sin x + cos x)/sqrt2
    let (s, c) = x.sin_cos();
    let cos_chi = (s - c) * FRAC_1_SQRT_2;
    let sin_chi = -(s + c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Gegenbauer polynomial `C_ell^(lambda)(t)` by the three-term recurrence.
///
/// `lambda == 0` is the circle case: it returns the Chebyshev polynomial
/// `T_ell(t)`, so `C_ell(t) / C_ell(1) = cos(ell * acos t)`.
pub fn gegenbauer(ell: usize, lambda: f64, t: f64) -> f64 {
    *gegenbauer_sequence(ell, lambda, t)
        .last()
        .expect("sequence holds degree 0")
}

/// All values `C_0, ..., C_ell` at `t`.
pub fn gegenbauer_sequence(ell: usize, lambda: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(ell + 1);
    out.push(1.0);
    if ell == 0 {
        return out;
    }
    if lambda == 0.0 {
        out.push(t);
        for n in 2..=ell {
            let v = 2.0 * t * out[n - 1] - out[n - 2];
            out.push(v);
        }
        return out;
    }
    out.push(2.0 * lambda * t);
    for n in 2..=ell {
        let nf = n as f64;
        let v = (2.0 * t * (nf + lambda - 1.0) * out[n - 1] - (nf + 2.0 * lambda - 2.0) * out[n - 2]) / nf;
        out.push(v);
    }
    out
}

/// Normalised ratios `C_l^((d-1)/2)(t) / C_l^((d-1)/2)(1)` for `l = 0..=ell` on the sphere `S^d`.
pub fn gegenbauer_ratios(ell: usize, d: usize, t: f64) -> Vec<f64> {
    let lambda = (d as f64 - 1.0) / 2.0;
    let num = gegenbauer_sequence(ell, lambda, t);
    let den = gegenbauer_sequence(ell, lambda, 1.0);
    num.iter().zip(&den).map(|(a, b)| a / b).collect()
}

/// Surface measure of the unit sphere `S^d` in `R^(d+1)`: `2 pi^((d+1)/2) / Gamma((d+1)/2)`.
pub fn sphere_area(d: usize) -> f64 {
    let h = (d as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / statrs::function::gamma::gamma(h)
}
