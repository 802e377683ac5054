use super::factor::{pow_mod, Factorization};

/// A square root of `a` modulo an odd prime `p`, if one exists.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Tonelli–Shanks
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// All solutions of `x² ≡ a (mod p^e)` in `[0, p^e)`.
fn sqrts_mod_prime_power(a: i128, p: u64, e: u32) -> Vec<u64> {
    let p128 = p as i128;
    // solutions mod p
    let mut sols: Vec<u64> = if p == 2 {
        (0..2u64).filter(|&x| ((x * x) as i128 - a).rem_euclid(2) == 0).collect()
    } else {
        match sqrt_mod_prime(a.rem_euclid(p128) as u64, p) {
            None => return Vec::new(),
            Some(0) => vec![0],
            Some(r) => vec![r, p - r],
        }
    };
    let mut pj: i128 = p128;
    for _ in 1..e {
        let next = pj * p128;
        let mut lifted = Vec::new();
        for &x in &sols {
            let x = x as i128;
            let unit = p != 2 && x % p128 != 0;
            if unit {
                // unique lift: (x + t p^j)^2 ≡ a  ⇔  2 x t ≡ (a - x²)/p^j (mod p)
                let rhs = ((a - x * x).rem_euclid(next) / pj).rem_euclid(p128);
                let inv = pow_mod(((2 * x) % p128) as u64, p - 2, p) as i128;
                let t = (rhs * inv).rem_euclid(p128);
                lifted.push((x + t * pj) as u64);
            } else if (x * x - a).rem_euclid(next) == 0 {
                // the condition does not depend on t: every lift works
                for t in 0..p128 {
                    lifted.push((x + t * pj) as u64);
                }
            }
        }
        sols = lifted;
        pj = next;
        if sols.is_empty() {
            break;
        }
    }
    sols.sort_unstable();
    sols
}

/// All solutions of `x² ≡ a (mod m)` in `[0, m)`, given the factorization of `m`.
pub fn sqrts_mod(a: i128, fac: &Factorization) -> Vec<u64> {
    let mut sols: Vec<u128> = vec![0];
    let mut modulus: u128 = 1;
    for &(p, e) in &fac.factors {
        let pe = (p as u128).pow(e);
        let local = sqrts_mod_prime_power(a, p, e);
        if local.is_empty() {
            return Vec::new();
        }
        // CRT: x ≡ s (mod modulus), x ≡ r (mod pe)
        let inv = mod_inverse((modulus % pe) as i128, pe as i128) as u128;
        let mut next = Vec::with_capacity(sols.len() * local.len());
        for &s in &sols {
            for &r in &local {
                let diff = (r as i128 - (s % pe) as i128).rem_euclid(pe as i128) as u128;
                let t = (diff * inv) % pe;
                next.push(s + modulus * t);
            }
        }
        modulus *= pe;
        sols = next;
    }
    let mut out: Vec<u64> = sols.into_iter().map(|x| x as u64).collect();
    out.sort_unstable();
    out
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}
