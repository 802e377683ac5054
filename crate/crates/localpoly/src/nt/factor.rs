use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prime factorization of `|n|`; primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, &(p, e)| acc * BigInt::from(p).pow(e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division, stopping early once the cofactor is certified prime.
pub fn factorize_u64(mut n: u64) -> Factorization {
    let mut factors = Vec::new();
    if n <= 1 {
        return Factorization { factors };
    }
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    // wheel over residues coprime to 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while n > 1 {
        if p.saturating_mul(p) > n || is_prime_u64(n) {
            factors.push((n, 1));
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    Factorization { factors }
}

/// Factorization of `|n|`; `n = 0` is rejected.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor 0"));
    }
    let m = n.abs();
    if let Some(v) = m.to_u64() {
        return Ok(factorize_u64(v));
    }
    // Beyond 64 bits: plain trial division on big integers.
    let mut m = m;
    let mut factors = Vec::new();
    let mut p = BigInt::from(2u8);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            let pv = p.to_u64().ok_or_else(|| Error::domain("prime factor exceeds 64 bits"))?;
            factors.push((pv, e));
        }
        if let Some(v) = m.to_u64() {
            let rest = factorize_u64(v);
            factors.extend(rest.factors);
            return Ok(Factorization { factors });
        }
        p += if p == BigInt::from(2u8) { 1 } else { 2 };
    }
    if !m.is_one() {
        return Err(Error::domain("cofactor exceeds 64 bits"));
    }
    Ok(Factorization { factors })
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize_u64(n).is_squarefree()
}

/// Möbius function; `mobius(0)` is 0.
pub fn mobius(n: u64) -> i8 {
    if n == 0 {
        return 0;
    }
    let f = factorize_u64(n);
    if !f.is_squarefree() {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let f = factorize_u64(n);
    let mut ds = vec![1u64];
    for (p, e) in f.factors {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// `d` is 1 or a fundamental discriminant.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let r = d.rem_euclid(4);
    let odd_part_ok = |m: i64| is_squarefree(m.unsigned_abs());
    if r == 1 {
        odd_part_ok(d)
    } else if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        (mr == 2 || mr == 3) && odd_part_ok(m)
    } else {
        false
    }
}

/// Splits a fundamental discriminant into prime discriminants
/// (`p* = ±p` with `p* ≡ 1 mod 4`, and one of `-4, 8, -8` for the 2-part).
pub fn prime_discriminant_factors(d: i64) -> Result<Vec<i64>> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::domain(format!("{d} is not a fundamental discriminant")));
    }
    if d == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = d;
    for (p, _) in factorize_u64(d.unsigned_abs()).factors {
        if p == 2 {
            continue;
        }
        let p = p as i64;
        let ps = if p % 4 == 1 { p } else { -p };
        out.push(ps);
        rest /= ps;
    }
    if rest != 1 {
        debug_assert!(rest == -4 || rest == 8 || rest == -8);
        out.insert(0, rest);
    }
    Ok(out)
}

/// Smallest-prime-factor table for fast factorization of many small integers.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Factorization of `n`, falling back to trial division beyond the table.
    pub fn factorize(&self, n: u64) -> Factorization {
        if n as usize > self.limit() {
            return factorize_u64(n);
        }
        let mut n = n as usize;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Factorization { factors }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.spf
            .iter()
            .enumerate()
            .filter(|&(i, &s)| i >= 2 && s as usize == i)
            .map(|(i, _)| i as u64)
    }
}
