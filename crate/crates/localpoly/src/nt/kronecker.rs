use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Extended Kronecker symbol `(a/n)` for arbitrary integers.
///
/// Uses `(a/-1) = sign(a)` (with `(0/-1) = 1`), `(a/0) = [a = ±1]` and the
/// Kronecker extension at 2: `(a/2) = 0` for even `a`, else `+1` when
/// `a ≡ ±1 (mod 8)` and `-1` when `a ≡ ±3 (mod 8)`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if let (Some(a), Some(n)) = (a.to_i128(), n.to_i128()) {
        return kronecker_i128(a, n);
    }
    kronecker_big(a.clone(), n.clone())
}

pub fn kronecker_i128(mut a: i128, mut n: i128) -> i8 {
    if n == 0 {
        return i8::from(a == 1 || a == -1);
    }
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a & 1 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if v & 1 == 1 && (r == 3 || r == 5) {
            sign = -sign;
        }
        n >>= v;
    }
    // Jacobi symbol (a/n), n odd positive.
    a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        if t > 0 {
            a >>= t;
            let r = n & 7;
            if t & 1 == 1 && (r == 3 || r == 5) {
                sign = -sign;
            }
        }
        if a & 3 == 3 && n & 3 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

fn kronecker_big(mut a: BigInt, mut n: BigInt) -> i8 {
    if n.is_zero() {
        return i8::from(a.abs().is_one());
    }
    let mut sign = 1i8;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            sign = -sign;
        }
    }
    let eight = BigInt::from(8);
    let v = n.trailing_zeros().unwrap_or(0);
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        let r = a.mod_floor(&eight);
        if v & 1 == 1 && (r == BigInt::from(3) || r == BigInt::from(5)) {
            sign = -sign;
        }
        n >>= v;
    }
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let t = a.trailing_zeros().unwrap_or(0);
        if t > 0 {
            a >>= t;
            let r = (&n % &eight).to_u8().unwrap_or(0);
            if t & 1 == 1 && (r == 3 || r == 5) {
                sign = -sign;
            }
        }
        let four = BigInt::from(4);
        if a.mod_floor(&four) == BigInt::from(3) && n.mod_floor(&four) == BigInt::from(3) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_brute(a: i128, p: i128) -> i8 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn matches_euler_criterion_for_odd_primes() {
        for p in [3i128, 5, 7, 11, 13, 29, 97] {
            for a in -60..60 {
                assert_eq!(kronecker_i128(a, p), legendre_brute(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn special_denominators() {
        assert_eq!(kronecker_i128(5, 0), 0);
        assert_eq!(kronecker_i128(-1, 0), 1);
        assert_eq!(kronecker_i128(-3, -1), -1);
        assert_eq!(kronecker_i128(3, -1), 1);
        assert_eq!(kronecker_i128(5, 2), -1);
        assert_eq!(kronecker_i128(7, 2), 1);
        assert_eq!(kronecker_i128(6, 2), 0);
        assert_eq!(kronecker_i128(29, 7), 1);
        for n in 1..50 {
            assert_eq!(kronecker_i128(1, n), 1);
        }
    }

    #[test]
    fn bigint_path_agrees() {
        for a in -40i128..40 {
            for n in -40i128..40 {
                let big = kronecker_big(BigInt::from(a), BigInt::from(n));
                assert_eq!(big, kronecker_i128(a, n), "a={a} n={n}");
            }
        }
        let huge = BigInt::from(10u8).pow(40) + 1;
        let v = kronecker(&BigInt::from(5), &huge);
        assert!(v == 1 || v == -1);
    }
}
