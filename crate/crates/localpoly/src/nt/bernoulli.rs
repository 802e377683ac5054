use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{binomial, kronecker_i128};

/// `B_0, …, B_n` with `B_1 = -1/2`, from `Σ_{j≤n} C(n+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli_number(n: usize) -> BigRational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// `B_n(x) = Σ_j C(n, j) B_j x^{n-j}`.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let b = bernoulli_numbers(n);
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    // Horner-free accumulation from the top power down
    for j in (0..=n).rev() {
        acc += BigRational::from_integer(binomial(n as u64, j as u64)) * &b[j] * &xp;
        xp *= x;
    }
    acc
}

/// Generalized Bernoulli number `B_{k,χ_t} = f^{k-1} Σ_{a=1}^{f} χ_t(a) B_k(a/f)`
/// for the Kronecker character of a fundamental discriminant `t` (conductor `f = |t|`).
pub fn generalized_bernoulli(k: usize, t: i64) -> BigRational {
    let f = t.unsigned_abs() as i64;
    let b = bernoulli_numbers(k);
    let binoms: Vec<BigRational> =
        (0..=k).map(|j| BigRational::from_integer(binomial(k as u64, j as u64))).collect();
    // f^{k-1} B_k(a/f) = Σ_j C(k,j) B_j a^{k-j} f^{j-1}
    let mut acc = BigRational::zero();
    for a in 1..=f {
        let chi = kronecker_i128(t as i128, a as i128);
        if chi == 0 {
            continue;
        }
        let mut term = BigRational::zero();
        for j in 0..=k {
            let pow_a = BigInt::from(a).pow((k - j) as u32);
            let fpow = if j == 0 {
                BigRational::new(BigInt::one(), BigInt::from(f))
            } else {
                BigRational::from_integer(BigInt::from(f).pow((j - 1) as u32))
            };
            term += &binoms[j] * &b[j] * BigRational::from_integer(pow_a) * fpow;
        }
        if chi > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
