//! Generalized Hurwitz class numbers `H(k, 1, ℓ, N; n)` and the closed form of
//! the inner sum of `c_∞` as a product of incomplete Dirichlet L-values.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_poly::{c_infty_scale, gamma_constant, LocalPolyParams};
use crate::nt::{
    dirichlet_l_nonpositive, dirichlet_l_positive_closed, divisors, factorize_u64, gcd_i128, is_fundamental_discriminant,
    is_squarefree, kronecker_i128, mobius, rat_pow, rat_to_f64, zeta_even,
};

/// `(-1)^k n = t m²` with `t` fundamental or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantDecomposition {
    pub n: i64,
    pub t: i64,
    pub m: u64,
}

/// Splits the signed value `v` as `t m²` with `t` fundamental or 1.
pub fn decompose_discriminant(v: i64) -> Option<DiscriminantDecomposition> {
    if v == 0 || !matches!(v.rem_euclid(4), 0 | 1) {
        return None;
    }
    let mut core: i64 = v.signum();
    let mut square: u64 = 1;
    for (p, e) in factorize_u64(v.unsigned_abs()).factors {
        if e % 2 == 1 {
            core *= p as i64;
        }
        square *= p.pow(e / 2);
    }
    let (t, m) = if core.rem_euclid(4) == 1 {
        (core, square)
    } else {
        // v ≡ 0, 1 (mod 4) forces the square part to be even here
        (4 * core, square / 2)
    };
    debug_assert!(is_fundamental_discriminant(t));
    Some(DiscriminantDecomposition { n: v, t, m })
}

/// `(-1)^k n = t m²` for `n > 0`.
pub fn fundamental_decomposition(k: i64, n: u64) -> Option<DiscriminantDecomposition> {
    let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    decompose_discriminant(sign * n as i64).map(|d| DiscriminantDecomposition { n: n as i64, ..d })
}

fn coprime(a: u64, b: u64) -> bool {
    gcd_i128(a as i128, b as i128) == 1
}

fn int_pow(r: u64, s: i64) -> BigRational {
    rat_pow(&BigRational::from_integer(BigInt::from(r)), s)
}

/// `σ_{ℓ,s}(n) = Σ_{r | n, gcd(ℓ, r) = 1} r^s`.
pub fn sigma_l(ell: u64, s: i64, n: u64) -> BigRational {
    divisors(n).into_iter().filter(|&r| coprime(ell, r)).map(|r| int_pow(r, s)).sum()
}

/// `σ_{ℓ,N,s}(n) = Σ r^s` over `r | n` with `gcd(ℓ, r) = gcd(n/r, N/ℓ) = 1`.
pub fn sigma_l_n(ell: u64, n_level: u64, s: i64, n: u64) -> BigRational {
    let cof = n_level / ell;
    divisors(n)
        .into_iter()
        .filter(|&r| coprime(ell, r) && coprime(n / r, cof))
        .map(|r| int_pow(r, s))
        .sum()
}

/// `Σ_{ℓ | N} μ(ℓ) χ_ℓ(a)²`, with `χ_ℓ²` the principal character mod `ℓ`.
pub fn level_indicator(n_level: u64, a: u64) -> i64 {
    divisors(n_level)
        .into_iter()
        .filter(|&l| coprime(a, l))
        .map(|l| mobius(l) as i64)
        .sum()
}

/// A class number: exact when its L-factor sits at a non-positive integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HValue {
    Exact(BigRational),
    Approx(f64),
}

impl HValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            HValue::Exact(r) => rat_to_f64(r),
            HValue::Approx(x) => *x,
        }
    }
}

/// `H(k, 1, ℓ, N; n)` for square-free `N` and `ℓ | N`.
///
/// For `k ≥ 1` the case split uses `(-1)^k n = t m²` and the value is exact.
/// For `k ≤ 0` the L-factor `L_ℓ(1-k, χ_t)` lies at a positive integer and the
/// split uses the parity of the dual weight `1 - k`, so that `t` has the sign of
/// `n`'s natural discriminant (e.g. `H(1-k, 1, ℓ, ℓ; D) = L_ℓ(k, χ_D)` for a
/// fundamental `D` of sign `(-1)^k`).
pub fn hurwitz_h(k: i64, ell: u64, n_level: u64, n: u64) -> Result<HValue> {
    if n_level == 0 || !is_squarefree(n_level) {
        return Err(Error::domain(format!("N = {n_level} is not square-free")));
    }
    if ell == 0 || !n_level.is_multiple_of(ell) {
        return Err(Error::domain(format!("ℓ = {ell} does not divide N = {n_level}")));
    }
    if k == 0 {
        return Err(Error::domain("k = 0 is not supported"));
    }
    if n == 0 {
        if ell != n_level {
            return Ok(HValue::Exact(BigRational::zero()));
        }
        return if k >= 1 {
            Ok(HValue::Exact(dirichlet_l_nonpositive(2 * k as u32, 1, n_level)?))
        } else {
            Ok(HValue::Approx(dirichlet_l_positive_closed((1 - 2 * k) as u32, 1, n_level)?))
        };
    }
    let parity = if k >= 1 { k } else { 1 - k };
    let Some(dec) = fundamental_decomposition(parity, n) else {
        return Ok(HValue::Exact(BigRational::zero()));
    };
    let t = dec.t;
    let chi = |a: u64| kronecker_i128(t as i128, a as i128) as i64;
    // Σ_{a | m, gcd(a, N) = 1} μ(a) χ_t(a) a^{k-1} σ(m/a)
    let mut divsum = BigRational::zero();
    for a in divisors(dec.m) {
        if !coprime(a, n_level) {
            continue;
        }
        let c = mobius(a) as i64 * chi(a);
        if c == 0 {
            continue;
        }
        let sigma = if ell == n_level {
            sigma_l(n_level, 2 * k - 1, dec.m / a)
        } else {
            sigma_l_n(ell, n_level, 1, dec.m / a)
        };
        divsum += BigRational::from_integer(c.into()) * int_pow(a, k - 1) * sigma;
    }
    // Π_{p | N/ℓ} (1 - χ_t(p) p^{-k}) / (1 - p^{-2k})
    let mut euler = BigRational::one();
    for p in factorize_u64(n_level / ell).primes() {
        let num = BigRational::one() - BigRational::from_integer(chi(p).into()) * int_pow(p, -k);
        let den = BigRational::one() - int_pow(p, -2 * k);
        euler *= num / den;
    }
    let rest = divsum * euler;
    if k >= 1 {
        Ok(HValue::Exact(dirichlet_l_nonpositive(k as u32, t, ell)? * rest))
    } else {
        let l = dirichlet_l_positive_closed((1 - k) as u32, t, ell)?;
        Ok(HValue::Approx(l * rat_to_f64(&rest)))
    }
}

/// Closed-form evaluation of the `c_∞` inner sum.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CInfinityClosed {
    /// `ζ(2k)^{-1} Σ_{ℓ|N} μ(ℓ) Π_{p|ℓ}(1-p^{-2k})^{-1} H(1-k,1,ℓ,ℓ;D) H(1-k,1,ℓ,ℓ;D₀)`.
    pub s: f64,
    /// `c_∞` on the normalization of the defining series.
    pub value: f64,
    /// `γ` derived from `value`.
    pub gamma: f64,
}

pub fn c_infty_closed(params: &LocalPolyParams) -> Result<CInfinityClosed> {
    let k = params.k as i64;
    let d = params.d.unsigned_abs();
    let d0 = params.d0.unsigned_abs();
    let mut sum = 0.0;
    for ell in divisors(params.n) {
        let mu = mobius(ell) as f64;
        let local: f64 = factorize_u64(ell).primes().map(|p| 1.0 / (1.0 - (p as f64).powi(-2 * k as i32))).product();
        let hd = hurwitz_h(1 - k, ell, ell, d)?.to_f64();
        let hd0 = hurwitz_h(1 - k, ell, ell, d0)?.to_f64();
        sum += mu * local * hd * hd0;
    }
    let s = sum / zeta_even(params.k);
    let value = c_infty_scale(params) * s;
    Ok(CInfinityClosed { s, value, gamma: gamma_constant(params, value) })
}

/// `c_∞` solved literally from `(2k-1) Δ^{1/2-k} c_∞ = 2^{2k-2}/(π ζ(2k)) Σ …`,
/// which carries an extra factor `2^{4k-4}/π²` against the defining series.
pub fn c_infty_closed_literal(params: &LocalPolyParams) -> Result<f64> {
    let closed = c_infty_closed(params)?;
    let k = params.k as i32;
    let delta = params.delta() as f64;
    Ok(delta.powf(k as f64 - 0.5) / (2 * k - 1) as f64 * 2f64.powi(2 * k - 2) / PI * closed.s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::rat;

    #[test]
    fn decompositions() {
        assert_eq!(fundamental_decomposition(2, 29), Some(DiscriminantDecomposition { n: 29, t: 29, m: 1 }));
        assert_eq!(fundamental_decomposition(2, 20), Some(DiscriminantDecomposition { n: 20, t: 5, m: 2 }));
        assert_eq!(fundamental_decomposition(2, 48).map(|d| (d.t, d.m)), Some((12, 2)));
        assert_eq!(fundamental_decomposition(1, 20).map(|d| (d.t, d.m)), Some((-20, 1)));
        assert_eq!(fundamental_decomposition(1, 4).map(|d| (d.t, d.m)), Some((-4, 1)));
        assert_eq!(fundamental_decomposition(2, 4).map(|d| (d.t, d.m)), Some((1, 2)));
        assert_eq!(fundamental_decomposition(2, 7), None);
    }

    #[test]
    fn decomposition_reconstructs() {
        for v in -500i64..=500 {
            if let Some(d) = decompose_discriminant(v) {
                assert_eq!(d.t * (d.m * d.m) as i64, v);
                assert!(is_fundamental_discriminant(d.t));
            } else {
                assert!(v == 0 || matches!(v.rem_euclid(4), 2 | 3));
            }
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_l(1, 5, 1), rat(1, 1));
        assert_eq!(sigma_l(2, 1, 6), rat(4, 1));
        assert_eq!(sigma_l(1, -1, 6), rat(12, 6));
        for n in 1..60u64 {
            for (l, nn) in [(1u64, 6u64), (3, 15), (5, 35)] {
                assert!(sigma_l_n(l, nn, 1, n) <= sigma_l(l, 1, n));
            }
        }
    }

    #[test]
    fn indicator_identity() {
        for n in (1..=30u64).filter(|&n| is_squarefree(n)) {
            for a in 1..=1000u64 {
                assert_eq!(level_indicator(n, a), i64::from(a % n == 0), "N={n} a={a}");
            }
        }
    }

    #[test]
    fn constant_term_branches() {
        assert_eq!(hurwitz_h(2, 7, 7, 0).unwrap(), HValue::Exact(dirichlet_l_nonpositive(4, 1, 7).unwrap()));
        assert_eq!(hurwitz_h(2, 1, 7, 0).unwrap(), HValue::Exact(rat(0, 1)));
        assert!(hurwitz_h(2, 2, 7, 5).is_err());
    }

    #[test]
    fn level_one_class_numbers() {
        // H(1, 1, 1, 1; n) is the Hurwitz class number: H(3) = 1/3, H(4) = 1/2, H(7) = 1
        assert_eq!(hurwitz_h(1, 1, 1, 3).unwrap(), HValue::Exact(rat(1, 3)));
        assert_eq!(hurwitz_h(1, 1, 1, 4).unwrap(), HValue::Exact(rat(1, 2)));
        assert_eq!(hurwitz_h(1, 1, 1, 7).unwrap(), HValue::Exact(rat(1, 1)));
        assert_eq!(hurwitz_h(1, 1, 1, 12).unwrap(), HValue::Exact(rat(4, 3)));
        // Weight 5/2 Cohen numbers: 1/120, -1/12, -2/5 at n = 0, 1, 5
        assert_eq!(hurwitz_h(2, 1, 1, 0).unwrap(), HValue::Exact(rat(1, 120)));
        assert_eq!(hurwitz_h(2, 1, 1, 1).unwrap(), HValue::Exact(rat(-1, 12)));
        assert_eq!(hurwitz_h(2, 1, 1, 5).unwrap(), HValue::Exact(rat(-2, 5)));
    }

    #[test]
    fn dual_weight_collapses_to_l_value() {
        for (l, d) in [(1u64, 29u64), (7, 29), (7, 92), (15, 61), (22, 89)] {
            let h = hurwitz_h(-1, l, l, d).unwrap().to_f64();
            let expect = dirichlet_l_positive_closed(2, d as i64, l).unwrap();
            assert!((h - expect).abs() < 1e-14, "ℓ={l} D={d}");
        }
    }
}
