//! Eichler integrals of a weight-`2k` cusp form and the real-line series `Φ_k`.
//!
//! `𝓔_f(z) = Σ c(n) n^{1-2k} q^n` and
//! `f*(z) = Σ conj(c(n)) (2πn)^{1-2k} Γ(2k-1, 4πny) q^{-n}`, both truncated at
//! the length of the coefficient list. With these normalizations
//! `𝔻^{2k-1} 𝓔_f = f` and `ξ_{2-2k} f* = -2^{2k-1} f`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::coeffs::FourierCoeffs;
use super::special::e;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EichlerValues {
    pub holomorphic: Complex64,
    pub nonholomorphic: Complex64,
}

/// `𝓔_f(z)` for `Im z ≥ 0`; on the real line the series still converges
/// absolutely because `|c(n)| n^{1-2k}` is summable.
pub fn holomorphic_eichler(coeffs: &[Complex64], k: u32, z: Complex64) -> Result<Complex64> {
    if z.im < 0.0 {
        return Err(Error::domain(format!("Im z = {} must be non-negative", z.im)));
    }
    let q = e(z.re) * (-TAU * z.im).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    for (i, c) in coeffs.iter().enumerate() {
        qn *= q;
        s += c * qn * ((i + 1) as f64).powi(1 - 2 * k as i32);
    }
    Ok(s)
}

/// `f*(z)` for `Im z > 0`.
pub fn nonholomorphic_eichler(coeffs: &[Complex64], k: u32, z: Complex64) -> Result<Complex64> {
    if z.im <= 0.0 {
        return Err(Error::domain(format!("Im z = {} must be positive", z.im)));
    }
    let order = 2 * k - 1;
    let mut s = Complex64::new(0.0, 0.0);
    for (i, c) in coeffs.iter().enumerate() {
        let n = (i + 1) as f64;
        let radial = scaled_upper_gamma(order, 2.0 * TAU * n * z.im);
        s += c.conj() * (TAU * n).powi(-(order as i32)) * radial * e(-n * z.re);
    }
    Ok(s)
}

/// `Γ(m, x) e^{x/2} = (m-1)! e^{-x/2} Σ_{j<m} x^j/j!` for integer `m ≥ 1`,
/// which stays finite where `Γ(m, x)` underflows and `e^{x/2}` overflows.
fn scaled_upper_gamma(m: u32, x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for j in 1..m {
        term *= x / j as f64;
        sum += term;
    }
    let fact: f64 = (1..m).map(|j| j as f64).product();
    fact * (-x / 2.0).exp() * sum
}

pub fn eichler_integrals(coeffs: &FourierCoeffs, z: Complex64) -> Result<EichlerValues> {
    let k = coeffs.params.k;
    Ok(EichlerValues {
        holomorphic: holomorphic_eichler(&coeffs.coeffs, k, z)?,
        nonholomorphic: nonholomorphic_eichler(&coeffs.coeffs, k, z)?,
    })
}

/// `Φ_k(x) = Σ_{n ≤ len} c(n) n^{1-2k} cos(2πnx)` for real coefficients.
pub fn phi(coeffs: &[f64], k: u32, x: f64) -> f64 {
    let mut s = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        let n = (i + 1) as f64;
        s += c * n.powi(1 - 2 * k as i32) * (TAU * n * x).cos();
    }
    s
}
