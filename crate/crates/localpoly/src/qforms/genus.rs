use crate::error::{Error, Result};
use crate::nt::{factorize_u64, gcd_i128, is_fundamental_discriminant, is_squarefree, kronecker_i128, prime_discriminant_factors};

use super::QuadForm;

/// The level-N genus character `χ_{D₀}` on forms `[a, b, c]` with `N | a`.
#[derive(Clone, Debug)]
pub struct GenusCharacter {
    d0: i64,
    n: u64,
    prime_discs: Vec<i64>,
    level_primes: Vec<u64>,
    squares_mod_4n: Vec<bool>,
}

impl GenusCharacter {
    pub fn new(d0: i64, n: u64) -> Result<Self> {
        if d0 != 1 && !is_fundamental_discriminant(d0) {
            return Err(Error::domain(format!("D0 = {d0} is not a fundamental discriminant")));
        }
        if n == 0 || !is_squarefree(n) {
            return Err(Error::domain(format!("N = {n} is not a positive square-free integer")));
        }
        let prime_discs = if d0 == 1 { Vec::new() } else { prime_discriminant_factors(d0)? };
        let level_primes = factorize_u64(n).primes().collect();
        let m = 4 * n;
        let mut squares_mod_4n = vec![false; m as usize];
        for x in 0..m {
            squares_mod_4n[(x * x % m) as usize] = true;
        }
        Ok(GenusCharacter { d0, n, prime_discs, level_primes, squares_mod_4n })
    }

    pub fn d0(&self) -> i64 {
        self.d0
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    /// True when `(D₀/ℓ) = 1` for every prime `ℓ | N`. The level-N character then
    /// agrees with the level-1 character, which is invariant under all of `GL₂(ℤ)`.
    pub fn is_level_transparent(&self) -> bool {
        self.level_primes.iter().all(|&l| kronecker_i128(self.d0 as i128, l as i128) == 1)
    }

    /// `χ_{D₀}(Q)`; requires `N | a`.
    pub fn eval(&self, q: &QuadForm) -> Result<i8> {
        if q.a % self.n as i128 != 0 {
            return Err(Error::domain(format!("N = {} does not divide a in {q}", self.n)));
        }
        Ok(self.eval_unchecked(q))
    }

    pub(crate) fn eval_unchecked(&self, q: &QuadForm) -> i8 {
        let v = self.first_admissible(q);
        #[cfg(debug_assertions)]
        if self.in_domain(q) {
            let all = self.all_splittings(q);
            debug_assert!(all.iter().all(|&w| w == v), "splitting dependence at {q}: {all:?}");
        }
        v
    }

    /// Forms of discriminant `D·D₀` with `D` a discriminant and a square mod `4N`,
    /// where the value is independent of the splitting.
    pub fn in_domain(&self, q: &QuadForm) -> bool {
        let disc = q.disc();
        let d0 = self.d0 as i128;
        if q.a % self.n as i128 != 0 || disc % d0 != 0 {
            return false;
        }
        let d = disc / d0;
        let m = 4 * self.n as i128;
        matches!(d.rem_euclid(4), 0 | 1) && self.squares_mod_4n[d.rem_euclid(m) as usize]
    }

    fn primitive_part_ok(&self, q: &QuadForm) -> bool {
        let a1 = q.a / self.n as i128;
        let g = gcd_i128(gcd_i128(gcd_i128(a1, q.b), q.c), self.d0 as i128);
        g == 1
    }

    fn splittings(&self) -> impl Iterator<Item = (i128, i128, i128, i128)> + '_ {
        let nd = self.prime_discs.len();
        let nl = self.level_primes.len();
        (0..1u32 << nd).flat_map(move |ds| {
            let d1: i128 = (0..nd).filter(|i| ds >> i & 1 == 1).map(|i| self.prime_discs[i] as i128).product();
            let d2 = self.d0 as i128 / d1;
            (0..1u32 << nl).map(move |ls| {
                let n1: i128 = (0..nl).filter(|i| ls >> i & 1 == 1).map(|i| self.level_primes[i] as i128).product();
                (d1, d2, n1, self.n as i128 / n1)
            })
        })
    }

    fn value_at(q: &QuadForm, a1: i128, (d1, d2, n1, n2): (i128, i128, i128, i128)) -> Option<i8> {
        let top = n1 * a1;
        let bottom = n2 * q.c;
        if gcd_i128(d1, top) != 1 || gcd_i128(d2, bottom) != 1 {
            return None;
        }
        Some(kronecker_i128(d1, top) * kronecker_i128(d2, bottom))
    }

    fn first_admissible(&self, q: &QuadForm) -> i8 {
        if !self.primitive_part_ok(q) {
            return 0;
        }
        let a1 = q.a / self.n as i128;
        self.splittings().find_map(|s| Self::value_at(q, a1, s)).unwrap_or(0)
    }

    /// Values of every admissible splitting (empty when none is admissible or the
    /// primitivity condition fails).
    pub fn all_splittings(&self, q: &QuadForm) -> Vec<i8> {
        if !self.primitive_part_ok(q) {
            return Vec::new();
        }
        let a1 = q.a / self.n as i128;
        self.splittings().filter_map(|s| Self::value_at(q, a1, s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::GL2Matrix;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_form(rng: &mut StdRng, n: i128) -> QuadForm {
        loop {
            let q = QuadForm::new(n * rng.gen_range(-40..=40), rng.gen_range(-60..=60), rng.gen_range(-60..=60));
            if q.a != 0 && q.c != 0 {
                return q;
            }
        }
    }

    fn square_mod(d0: i64, n: u64) -> bool {
        let m = 4 * n as i64;
        (0..m).any(|x| (x * x - d0).rem_euclid(m) == 0)
    }

    fn random_admissible(rng: &mut StdRng, n: i128, d0: i64) -> QuadForm {
        let chi = GenusCharacter::new(d0, n as u64).unwrap();
        loop {
            let q = random_form(rng, n);
            if chi.in_domain(&q) {
                return q;
            }
        }
    }

    fn random_gamma0(rng: &mut StdRng, n: i128) -> GL2Matrix {
        let mut m = GL2Matrix::IDENTITY;
        for _ in 0..4 {
            let t = rng.gen_range(-3..=3);
            let g = if rng.gen_bool(0.5) { GL2Matrix::new(1, t, 0, 1) } else { GL2Matrix::new(1, 0, n * t, 1) };
            m = m.mul(&g);
        }
        m
    }

    #[test]
    fn trivial_character() {
        let chi = GenusCharacter::new(1, 7).unwrap();
        assert_eq!(chi.eval(&QuadForm::new(-7, 3, 11)).unwrap(), 1);
        assert!(chi.eval(&QuadForm::new(-5, 3, 11)).is_err());
        assert!(GenusCharacter::new(20, 7).is_err());
        assert!(GenusCharacter::new(5, 12).is_err());
    }

    #[test]
    fn negation_and_gamma0_invariance() {
        let mut rng = StdRng::seed_from_u64(11);
        for &(d0, n) in &[(29i64, 7u64), (-4, 5), (61, 15), (89, 22), (-23, 6), (12, 1)] {
            let chi = GenusCharacter::new(d0, n).unwrap();
            assert!(square_mod(d0, n));
            for _ in 0..1000 {
                let q = random_admissible(&mut rng, n as i128, d0);
                let v = chi.eval(&q).unwrap();
                assert_eq!(chi.eval(&q.neg()).unwrap(), d0.signum() as i8 * v, "{q}");
                let g = random_gamma0(&mut rng, n as i128);
                assert_eq!(chi.eval(&q.apply(&g).unwrap()).unwrap(), v, "{q}");
            }
        }
    }

    #[test]
    fn splitting_independence_exhaustive() {
        let mut rng = StdRng::seed_from_u64(5);
        let ds: Vec<i64> = (-200..=200).filter(|&d| is_fundamental_discriminant(d)).collect();
        let ns: Vec<u64> = (1..=30).filter(|&n| is_squarefree(n)).collect();
        for &d0 in &ds {
            for &n in ns.iter().step_by(3) {
                if !square_mod(d0, n) {
                    continue;
                }
                let chi = GenusCharacter::new(d0, n).unwrap();
                for _ in 0..20 {
                    let q = random_admissible(&mut rng, n as i128, d0);
                    let vals = chi.all_splittings(&q);
                    assert!(vals.windows(2).all(|w| w[0] == w[1]), "D0={d0} N={n} {q}: {vals:?}");
                }
            }
        }
    }

    #[test]
    fn transparent_level_matches_level_one() {
        let mut rng = StdRng::seed_from_u64(3);
        for &(d0, n) in &[(29i64, 7u64), (61, 15), (89, 22)] {
            let chi = GenusCharacter::new(d0, n).unwrap();
            let chi1 = GenusCharacter::new(d0, 1).unwrap();
            assert!(chi.is_level_transparent());
            for _ in 0..2000 {
                let q = random_admissible(&mut rng, n as i128, d0);
                assert_eq!(chi.eval(&q).unwrap(), chi1.eval(&q).unwrap(), "{q}");
            }
        }
        assert!(!GenusCharacter::new(5, 7).unwrap().is_level_transparent());
    }
}
