//! Exact local polynomials and the constant `c_∞`.
//!
//! For parameters `(k, N, D, D₀)` with `Δ = D·D₀`, the script polynomial at a
//! rational `x` is the finite sum of `χ_{D₀}(Q)·Q(x,1)^{k-1}` over forms of
//! discriminant `Δ` with `N | a` and `a < 0 < Q(x,1)`. The local polynomial is
//! `c_∞ + (-1)^{k-1} C(2k-2,k-1) π 2^{2-2k}` times that sum.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::nt::{
    binomial, factorize_u64, is_fundamental_discriminant, is_prime_u64, is_square_i128, is_squarefree, kronecker_i128,
    rat_to_f64, sqrts_mod, SpfSieve,
};
use crate::qforms::{
    enumerate_simple_forms, enumerate_straddling_oracle, for_each_straddling, simple_forms_cached, GenusCharacter,
    QuadForm, RationalPoint, StraddlingQuery,
};

/// Weight parameter `k`, level `N`, and twisting discriminants `D`, `D₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalPolyParams {
    pub k: u32,
    pub n: u64,
    pub d: i64,
    pub d0: i64,
}

impl LocalPolyParams {
    /// Parameters satisfying the full hypotheses of the vanishing criterion:
    /// `D`, `D₀` fundamental, both squares mod `4N`, and `(D/ℓ) = (D₀/ℓ)` for
    /// every prime `ℓ | N`.
    pub fn new(k: u32, n: u64, d: i64, d0: i64) -> Result<Self> {
        let p = Self::research(k, n, d, d0)?;
        let fundamental = |t: i64| t == 1 || is_fundamental_discriminant(t);
        if !fundamental(d) {
            return Err(Error::validation(format!("D = {d} is not a fundamental discriminant")));
        }
        let m = 4 * n as i64;
        for t in [d, d0] {
            if !(0..m).any(|x| (x * x - t).rem_euclid(m) == 0) {
                return Err(Error::validation(format!("{t} is not a square mod {m}")));
            }
        }
        for l in factorize_u64(n).primes() {
            let (a, b) = (kronecker_i128(d as i128, l as i128), kronecker_i128(d0 as i128, l as i128));
            if a != b {
                return Err(Error::validation(format!("(D/{l}) = {a} differs from (D0/{l}) = {b}")));
            }
        }
        Ok(p)
    }

    /// Minimal checks only: anything the evaluators need to be well defined.
    pub fn research(k: u32, n: u64, d: i64, d0: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::validation(format!("weight parameter k = {k} must be at least 2")));
        }
        if n == 0 || !is_squarefree(n) {
            return Err(Error::validation(format!("N = {n} is not a positive square-free integer")));
        }
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        if d.signum() != sign || d0.signum() != sign {
            return Err(Error::validation(format!("D and D0 must have sign (-1)^k = {sign}")));
        }
        if d0 != 1 && !is_fundamental_discriminant(d0) {
            return Err(Error::validation(format!("D0 = {d0} is not a fundamental discriminant")));
        }
        if !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::validation(format!("D = {d} is not a discriminant")));
        }
        let delta = d as i128 * d0 as i128;
        if is_square_i128(delta) {
            return Err(Error::domain(format!("Δ = {delta} is a square")));
        }
        Ok(LocalPolyParams { k, n, d, d0 })
    }

    pub fn delta(&self) -> i128 {
        self.d as i128 * self.d0 as i128
    }

    /// `(-1)^{k-1} C(2k-2, k-1) π 2^{2-2k}`.
    pub fn prefactor(&self) -> f64 {
        let k = self.k as i32;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        sign * binom_f64(2 * self.k as u64 - 2, self.k as u64 - 1) * PI * 2f64.powi(2 - 2 * k)
    }

    /// The first `count` unit fractions `1/p` with `p` prime and coprime to `NΔ`.
    pub fn default_samples(&self, count: usize) -> Vec<BigRational> {
        let bad = self.n as i128 * self.delta();
        (2u64..)
            .filter(|&p| is_prime_u64(p) && bad % p as i128 != 0)
            .take(count)
            .map(|p| BigRational::new(BigInt::one(), BigInt::from(p)))
            .collect()
    }
}

fn binom_f64(n: u64, k: u64) -> f64 {
    binomial(n, k).to_string().parse().unwrap_or(f64::INFINITY)
}

fn pow_big(base: i128, e: u32) -> BigInt {
    BigInt::from(base).pow(e)
}

/// Memoizing evaluator of the script polynomial for fixed parameters.
pub struct LocalPolynomial {
    params: LocalPolyParams,
    chi: GenusCharacter,
    simple: Arc<Vec<QuadForm>>,
    // χ on the simple forms, valid when the character is GL₂(ℤ)-invariant
    simple_chi: Option<Vec<i8>>,
    memo: Mutex<HashMap<RationalPoint, BigRational>>,
}

impl LocalPolynomial {
    pub fn new(params: &LocalPolyParams) -> Result<Self> {
        let chi = GenusCharacter::new(params.d0, params.n)?;
        let simple = simple_forms_cached(params.delta())?;
        let simple_chi = if chi.is_level_transparent() {
            let chi1 = GenusCharacter::new(params.d0, 1)?;
            Some(simple.iter().map(|f| chi1.eval_unchecked(f)).collect())
        } else {
            None
        };
        Ok(LocalPolynomial { params: *params, chi, simple, simple_chi, memo: Mutex::new(HashMap::new()) })
    }

    pub fn params(&self) -> &LocalPolyParams {
        &self.params
    }

    pub fn character(&self) -> &GenusCharacter {
        &self.chi
    }

    /// Number of memoized evaluation points.
    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        self.eval_point(RationalPoint::from_big(x)?)
    }

    pub fn eval_point(&self, x: RationalPoint) -> Result<BigRational> {
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(&x) {
            return Ok(v.clone());
        }
        let v = self.compute(x)?;
        self.memo.lock().expect("memo poisoned").insert(x, v.clone());
        Ok(v)
    }

    fn compute(&self, x: RationalPoint) -> Result<BigRational> {
        let km1 = self.params.k - 1;
        let mut small: i128 = 0;
        let mut big = BigInt::zero();
        let mut overflow = false;
        for_each_straddling(self.params.delta(), self.params.n, x, &self.simple, |t| {
            let chi = match &self.simple_chi {
                Some(c) => c[t.simple],
                None => self.chi.eval_unchecked(&t.form(&self.simple)),
            };
            if chi == 0 {
                return;
            }
            if km1 == 1 {
                match small.checked_add(chi as i128 * t.value) {
                    Some(s) => small = s,
                    None => overflow = true,
                }
            } else {
                big += pow_big(t.value, km1) * chi as i32;
            }
        })?;
        if overflow {
            return Err(Error::Overflow("script polynomial accumulator"));
        }
        let num = big + BigInt::from(small);
        Ok(BigRational::new(num, pow_big(x.q, 2 * km1)))
    }

    /// Same value through the window-scan enumerator and the level-N character.
    pub fn eval_oracle(&self, x: &BigRational) -> Result<BigRational> {
        let q = StraddlingQuery::new(self.params.delta(), self.params.n, x.clone())?;
        let mut acc = BigRational::zero();
        for f in enumerate_straddling_oracle(&q)? {
            let chi = self.chi.eval_unchecked(&f);
            if chi != 0 {
                acc += form_value(&f, x).pow(self.params.k as i32 - 1) * BigRational::from_integer(chi.into());
            }
        }
        Ok(acc)
    }
}

fn form_value(f: &QuadForm, x: &BigRational) -> BigRational {
    let c = |v: i128| BigRational::from_integer(BigInt::from(v));
    c(f.a) * x * x + c(f.b) * x + c(f.c)
}

/// Script polynomial at `x`.
pub fn eval_script_p(params: &LocalPolyParams, x: &BigRational) -> Result<BigRational> {
    LocalPolynomial::new(params)?.eval(x)
}

/// Sum of `χ_{D₀}(Q)·Q(x,1)^{k-1}` over the simple forms `a < 0 < c`, `N | a`.
pub fn simple_form_polynomial(params: &LocalPolyParams, x: &BigRational) -> Result<BigRational> {
    let chi = GenusCharacter::new(params.d0, params.n)?;
    let mut acc = BigRational::zero();
    for f in enumerate_simple_forms(params.delta(), params.n)? {
        let c = chi.eval_unchecked(&f);
        if c != 0 {
            acc += form_value(&f, x).pow(params.k as i32 - 1) * BigRational::from_integer(c.into());
        }
    }
    Ok(acc)
}

/// Truncated series for `c_∞`, together with the inner Dirichlet-type sum.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CInfinity {
    /// `Σ_{a ≤ a_max, N | a} a^{-k} Σ_b χ[a, b, (b²-Δ)/4a]`.
    pub s: f64,
    /// Largest deviation of the partial sums from `s` over the last decade of `a`.
    pub s_tail: f64,
    /// `Δ^{k-1/2}/(2k-1) · π · 2^{2-2k} · s`.
    pub value: f64,
    pub tail: f64,
    pub a_max: u64,
}

/// `Δ^{k-1/2} π 2^{2-2k} / (2k-1)`, the factor relating `c_∞` to its inner sum.
pub fn c_infty_scale(params: &LocalPolyParams) -> f64 {
    let k = params.k as i32;
    (params.delta() as f64).powf(k as f64 - 0.5) / (2 * k - 1) as f64 * PI * 2f64.powi(2 - 2 * k)
}

/// Default truncation of the `c_∞` series.
pub const DEFAULT_A_MAX: u64 = 1_000_000;

pub fn c_infty_series(params: &LocalPolyParams, a_max: u64) -> Result<CInfinity> {
    let chi = GenusCharacter::new(params.d0, params.n)?;
    let delta = params.delta();
    let n = params.n;
    let terms = (a_max / n) as usize;
    let sieve = SpfSieve::new(4 * a_max as usize + 1);
    let k = params.k as i32;
    let term = |j: usize| -> f64 {
        let a = (j as u64 + 1) * n;
        let fac = sieve.factorize(4 * a);
        let ai = a as i128;
        let mut psi = 0i64;
        for b in sqrts_mod(delta, &fac) {
            let b = b as i128;
            if b >= 2 * ai {
                continue;
            }
            let f = QuadForm::new(ai, b, (b * b - delta) / (4 * ai));
            psi += chi.eval_unchecked(&f) as i64;
        }
        psi as f64 / (a as f64).powi(k)
    };
    let values = exec::map_range(terms, term);
    let mut partial = Vec::with_capacity(terms);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        partial.push(sum);
    }
    let start = terms / 10;
    let s_tail = partial[start.min(partial.len().saturating_sub(1))..]
        .iter()
        .map(|p| (p - sum).abs())
        .fold(0.0, f64::max);
    let scale = c_infty_scale(params);
    Ok(CInfinity { s: sum, s_tail, value: scale * sum, tail: scale * s_tail, a_max })
}

/// `c_∞ + prefactor · script(x)`, with the exact part converted last.
pub fn eval_p(params: &LocalPolyParams, x: &BigRational, c_infty: &CInfinity) -> Result<f64> {
    let script = eval_script_p(params, x)?;
    Ok(c_infty.value + params.prefactor() * rat_to_f64(&script))
}

/// `γ = (-1)^k 2^{2k-2} / (π C(2k-2, k-1)) · c_∞`.
pub fn gamma_constant(params: &LocalPolyParams, c_infty: f64) -> f64 {
    let k = params.k as i32;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * 2f64.powi(2 * k - 2) / (PI * binom_f64(2 * params.k as u64 - 2, params.k as u64 - 1)) * c_infty
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::rat;

    fn p7(d: i64) -> LocalPolyParams {
        LocalPolyParams::new(2, 7, d, 29).unwrap()
    }

    #[test]
    fn level_seven_table_entries() {
        assert_eq!(eval_script_p(&p7(37), &rat(1, 2)).unwrap(), rat(144, 1));
        assert_eq!(eval_script_p(&p7(92), &rat(1, 3)).unwrap(), rat(576, 1));
    }

    #[test]
    fn trivial_character_at_zero() {
        let p = LocalPolyParams::new(2, 1, 5, 1).unwrap();
        assert_eq!(eval_script_p(&p, &rat(0, 1)).unwrap(), rat(2, 1));
    }

    #[test]
    fn validation_rejects_bad_pairs() {
        assert!(LocalPolyParams::new(2, 7, 33, 29).is_err()); // (33/7) = -1
        assert!(LocalPolyParams::new(2, 7, 29, 29).is_err()); // square Δ
        assert!(LocalPolyParams::new(2, 7, -3, 29).is_err()); // sign
        assert!(LocalPolyParams::new(2, 7, 148, 29).is_err()); // not fundamental
        assert!(LocalPolyParams::research(2, 7, 148, 29).is_ok());
        assert!(LocalPolyParams::new(1, 7, -3, -4).is_err());
    }

    #[test]
    fn fast_and_oracle_agree() {
        let lp = LocalPolynomial::new(&p7(57)).unwrap();
        for (p, q) in [(1, 2), (1, 3), (2, 5), (-3, 7), (5, 12), (0, 1)] {
            let x = rat(p, q);
            assert_eq!(lp.eval(&x).unwrap(), lp.eval_oracle(&x).unwrap(), "x={p}/{q}");
        }
    }

    #[test]
    fn non_transparent_character_path() {
        // (5/7) = -1, so the level-7 character differs from the classical one.
        let p = LocalPolyParams::research(2, 7, 8, 5).unwrap();
        let lp = LocalPolynomial::new(&p).unwrap();
        assert!(!lp.character().is_level_transparent());
        for (a, b) in [(1, 2), (2, 7), (3, 11)] {
            let x = rat(a, b);
            assert_eq!(lp.eval(&x).unwrap(), lp.eval_oracle(&x).unwrap());
        }
    }

    #[test]
    fn fricke_identity_and_anti_invariance() {
        let p = p7(37);
        let lp = LocalPolynomial::new(&p).unwrap();
        let n = rat(7, 1);
        for (a, b) in [(1, 2), (1, 3), (2, 5), (3, 4), (-2, 9)] {
            let x = rat(a, b);
            let w = -(rat(1, 1) / (&n * &x));
            let lhs = simple_form_polynomial(&p, &x).unwrap();
            let rhs = lp.eval(&x).unwrap() - &n * &x * &x * lp.eval(&w).unwrap();
            assert_eq!(lhs, rhs, "x={a}/{b}");
            let slashed = &n * &x * &x * simple_form_polynomial(&p, &w).unwrap();
            assert_eq!(slashed - &lhs, -rat(2, 1) * &lhs);
        }
    }

    #[test]
    fn simple_polynomial_at_zero() {
        let p = p7(37);
        let chi = GenusCharacter::new(29, 7).unwrap();
        let expect: i128 = enumerate_simple_forms(p.delta(), 7)
            .unwrap()
            .iter()
            .map(|f| chi.eval(f).unwrap() as i128 * f.c)
            .sum();
        assert_eq!(simple_form_polynomial(&p, &rat(0, 1)).unwrap(), BigRational::from_integer(expect.into()));
    }

    #[test]
    fn default_samples_skip_bad_primes() {
        let p = LocalPolyParams::new(2, 22, 97, 89).unwrap();
        assert_eq!(p.default_samples(3), vec![rat(1, 3), rat(1, 5), rat(1, 7)]);
    }
}
