use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{
    bernoulli_number, factorial, factorize_u64, generalized_bernoulli, is_fundamental_discriminant,
    kronecker_i128, rat_to_f64,
};
use crate::error::{Error, Result};

/// A floating value together with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValue {
    pub value: f64,
    pub error: f64,
}

fn check_t(t: i64) -> Result<()> {
    if !is_fundamental_discriminant(t) {
        return Err(Error::domain(format!("{t} is not 1 or a fundamental discriminant")));
    }
    Ok(())
}

/// Exact `L_ℓ(1-k, χ_t) = L(1-k, χ_t) · Π_{p|ℓ} (1 - χ_t(p) p^{k-1})`,
/// with `L(1-k, χ) = -B_{k,χ}/k`.
pub fn dirichlet_l_nonpositive(k: u32, t: i64, ell: u64) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    check_t(t)?;
    if ell == 0 {
        return Err(Error::domain("ℓ must be positive"));
    }
    let b = generalized_bernoulli(k as usize, t);
    let mut val = -b / BigRational::from_integer(BigInt::from(k));
    for p in factorize_u64(ell).primes() {
        let chi = kronecker_i128(t as i128, p as i128);
        let euler = BigRational::one()
            - BigRational::from_integer(BigInt::from(chi) * BigInt::from(p).pow(k - 1));
        val *= euler;
    }
    Ok(val)
}

/// `L_ℓ(k, χ_t)` by direct summation of the Dirichlet series.
///
/// Terms with `gcd(n, ℓ) > 1` are skipped. The returned error is the rigorous
/// tail bound `Σ_{n>X} n^{-k} ≤ X^{1-k}/(k-1)`, with `X` chosen so the bound
/// meets `tol` (capped at `max_terms`).
pub fn dirichlet_l_positive(k: u32, t: i64, ell: u64, tol: f64, max_terms: u64) -> Result<LValue> {
    if k < 2 {
        return Err(Error::domain("direct summation needs k ≥ 2"));
    }
    check_t(t)?;
    let kf = k as f64;
    let needed = ((kf - 1.0) * tol).powf(-1.0 / (kf - 1.0)).ceil();
    let x = if needed.is_finite() { (needed as u64).min(max_terms).max(1) } else { max_terms };
    let ell_primes: Vec<u64> = factorize_u64(ell).primes().collect();
    // Kahan summation, smallest terms last is not needed at these magnitudes.
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for n in 1..=x {
        if ell_primes.iter().any(|&p| n % p == 0) {
            continue;
        }
        let chi = kronecker_i128(t as i128, n as i128);
        if chi == 0 {
            continue;
        }
        let term = chi as f64 * (n as f64).powf(-kf);
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    let error = (x as f64).powf(1.0 - kf) / (kf - 1.0);
    Ok(LValue { value: sum, error })
}

/// `L_ℓ(k, χ_t)` from the closed form valid when `χ_t(-1) = (-1)^k`:
/// `L(k, χ) = (-1)^{1+(k-δ)/2} √f (2π/f)^k B_{k,χ} / (2·k!)`, `δ ∈ {0,1}` the parity.
pub fn dirichlet_l_positive_closed(k: u32, t: i64, ell: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::domain("k must be positive"));
    }
    check_t(t)?;
    let delta = u32::from(t < 0);
    if !(k + delta).is_multiple_of(2) {
        return Err(Error::domain("closed form needs χ_t(-1) = (-1)^k"));
    }
    if t == 1 && k == 1 {
        return Err(Error::domain("ζ has a pole at 1"));
    }
    let f = t.unsigned_abs() as f64;
    let b = rat_to_f64(&generalized_bernoulli(k as usize, t));
    let kfact = rat_to_f64(&BigRational::from_integer(factorial(k as u64)));
    let sign = if ((k - delta) / 2).is_multiple_of(2) { -1.0 } else { 1.0 };
    let mut val = sign * f.sqrt() * (2.0 * PI / f).powi(k as i32) * b / (2.0 * kfact);
    for p in factorize_u64(ell).primes() {
        let chi = kronecker_i128(t as i128, p as i128) as f64;
        val *= 1.0 - chi * (p as f64).powi(-(k as i32));
    }
    Ok(val)
}

/// `ζ(2k)` via `(-1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!)`.
pub fn zeta_even(k: u32) -> f64 {
    let b = rat_to_f64(&bernoulli_number(2 * k as usize));
    let fact = rat_to_f64(&BigRational::from_integer(factorial(2 * k as u64)));
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * b * (2.0 * PI).powi(2 * k as i32) / (2.0 * fact)
}
