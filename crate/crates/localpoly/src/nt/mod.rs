//! Integer and rational number theory shared by every other module.

mod bernoulli;
mod cf;
mod dirichlet;
mod factor;
mod kronecker;
mod roots;

pub use bernoulli::{bernoulli_number, bernoulli_numbers, bernoulli_poly, generalized_bernoulli};
pub use cf::ContinuedFraction;
pub use dirichlet::{
    dirichlet_l_nonpositive, dirichlet_l_positive, dirichlet_l_positive_closed, zeta_even, LValue,
};
pub use factor::{
    divisors, factorize, factorize_u64, is_fundamental_discriminant, is_prime_u64, is_squarefree,
    mobius, prime_discriminant_factors, Factorization, SpfSieve,
};
pub use kronecker::{kronecker, kronecker_i128};
pub use roots::{sqrt_mod_prime, sqrts_mod};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `x^e` for a rational base and signed exponent; `0^e` with `e < 0` panics.
pub fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square_i128(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt_u128(n as u128);
        r * r == n as u128
    }
}

/// Converts a rational to `f64` without overflowing on large numerators.
pub fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = x.numer().bits().max(x.denom().bits()) as i64 - 900;
    let (n, d) = if shift > 0 {
        (x.numer() >> shift as usize, x.denom() >> shift as usize)
    } else {
        (x.numer().clone(), x.denom().clone())
    };
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

/// Reduces `x` to its representative in `[0, 1)`.
pub fn frac_part(x: &BigRational) -> BigRational {
    x - x.floor()
}
