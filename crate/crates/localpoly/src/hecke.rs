//! Hecke operators of weight `2 - 2k` on 1-periodic functions of a rational
//! argument, polynomials in them, and the exact vanishing detector.
//!
//! `(T_p h)(x) = p^{1-2k} h(px) + p^{-1} Σ_{b mod p} h((x + b)/p)`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::local_poly::{LocalPolyParams, LocalPolynomial};
use crate::nt::{is_prime_u64, rat_pow};
use crate::qforms::RationalPoint;

/// A function of a rational argument that is invariant under `x ↦ x + 1`.
pub trait PeriodicFunction: Sync {
    fn eval(&self, x: RationalPoint) -> Result<BigRational>;
}

impl PeriodicFunction for LocalPolynomial {
    fn eval(&self, x: RationalPoint) -> Result<BigRational> {
        self.eval_point(x)
    }
}

/// Adapter for closures.
pub struct FnPeriodic<F>(pub F);

impl<F> PeriodicFunction for FnPeriodic<F>
where
    F: Fn(RationalPoint) -> Result<BigRational> + Sync,
{
    fn eval(&self, x: RationalPoint) -> Result<BigRational> {
        (self.0)(x)
    }
}

/// The linear factor `T_p - λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeFactor {
    pub p: u64,
    pub lambda: BigRational,
}

/// `Σ_j coeffs[j] T_p^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeTerm {
    pub p: u64,
    pub coeffs: Vec<BigRational>,
}

impl HeckeTerm {
    pub fn linear(f: HeckeFactor) -> Self {
        HeckeTerm { p: f.p, coeffs: vec![-f.lambda, BigRational::one()] }
    }

    /// Value on constants: `Σ_j c_j (p^{1-2k} + 1)^j`.
    fn constant_multiplier(&self, k: u32) -> BigRational {
        let t = rat_pow(&BigRational::from_integer(BigInt::from(self.p)), 1 - 2 * k as i64) + BigRational::one();
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for c in &self.coeffs {
            acc += c * &pow;
            pow *= &t;
        }
        acc
    }
}

/// Product of commuting terms, applied right to left (the last term acts first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckePolynomial {
    pub terms: Vec<HeckeTerm>,
}

pub const PRESET_NAMES: [&str; 3] = ["level7-trivial", "level15", "level22"];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl HeckePolynomial {
    pub fn identity() -> Self {
        HeckePolynomial::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = HeckeFactor>) -> Self {
        HeckePolynomial { terms: factors.into_iter().map(HeckeTerm::linear).collect() }
    }

    /// Named annihilating polynomials for the shipped weight-4 examples.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "level7-trivial" => Some(Self::identity()),
            "level15" => Some(Self::from_factors([
                HeckeFactor { p: 11, lambda: q(32, 1331) },
                HeckeFactor { p: 7, lambda: q(-24, 343) },
            ])),
            "level22" => Some(HeckePolynomial {
                terms: vec![
                    HeckeTerm { p: 13, coeffs: vec![q(400, 4826809), q(-80, 2197), q(1, 1)] },
                    HeckeTerm::linear(HeckeFactor { p: 3, lambda: q(-7, 27) }),
                    HeckeTerm::linear(HeckeFactor { p: 5, lambda: q(-3, 125) }),
                ],
            }),
            _ => None,
        }
    }

    /// Preset matching the level of the shipped examples, if any.
    pub fn preset_for_level(n: u64) -> Option<Self> {
        match n {
            7 => Self::preset("level7-trivial"),
            15 => Self::preset("level15"),
            22 => Self::preset("level22"),
            _ => None,
        }
    }

    /// Parses `p:num/den,p:num/den,...` as linear factors `T_p - num/den`.
    pub fn parse_factors(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (p, lam) = part
                .split_once(':')
                .ok_or_else(|| Error::validation(format!("factor `{part}` is not of the form p:λ")))?;
            out.push(HeckeFactor { p: parse_u64(p)?, lambda: parse_rational(lam)? });
        }
        Ok(Self::from_factors(out))
    }

    /// Parses `p;c0,c1,...` as the expanded polynomial `Σ c_j T_p^j`.
    pub fn parse_expanded(s: &str) -> Result<Self> {
        let (p, cs) = s
            .split_once(';')
            .ok_or_else(|| Error::validation(format!("`{s}` is not of the form p;c0,c1,...")))?;
        let coeffs = cs.split(',').map(|c| parse_rational(c.trim())).collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::validation("empty coefficient list"));
        }
        Ok(HeckePolynomial { terms: vec![HeckeTerm { p: parse_u64(p)?, coeffs }] })
    }

    pub fn then(mut self, other: HeckePolynomial) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn validate(&self, n: u64) -> Result<()> {
        for t in &self.terms {
            if !is_prime_u64(t.p) {
                return Err(Error::domain(format!("{} is not prime", t.p)));
            }
            if n.is_multiple_of(t.p) {
                return Err(Error::domain(format!("p = {} divides the level {n}", t.p)));
            }
        }
        Ok(())
    }

    /// Action on constant functions.
    pub fn constant_multiplier(&self, k: u32) -> BigRational {
        self.terms.iter().map(|t| t.constant_multiplier(k)).product()
    }

    /// Number of base evaluations per point before memoization.
    pub fn fan_out(&self) -> u64 {
        self.terms.iter().map(|t| (t.p + 1).pow(t.coeffs.len() as u32 - 1)).product()
    }
}

impl fmt::Display for HeckePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mons: Vec<String> = t
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| match j {
                        0 => format!("{c}"),
                        1 => format!("{c}·T{}", t.p),
                        _ => format!("{c}·T{}^{j}", t.p),
                    })
                    .collect();
                format!("({})", mons.join(" + "))
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::validation(format!("`{s}` is not a positive integer")))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::validation(format!("`{s}` is not a rational number"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn reduce(x: RationalPoint) -> RationalPoint {
    RationalPoint { p: x.p.rem_euclid(x.q), q: x.q }
}

type Key = (usize, usize, RationalPoint);

/// Evaluates `poly(T) h` at rationals; all intermediate values memoized on `x mod 1`.
pub struct HeckeEvaluator<'a, H: PeriodicFunction> {
    h: &'a H,
    poly: HeckePolynomial,
    weights: Vec<(BigRational, BigRational)>,
    base: HashMap<RationalPoint, BigRational>,
    memo: HashMap<Key, BigRational>,
}

impl<'a, H: PeriodicFunction> HeckeEvaluator<'a, H> {
    pub fn new(h: &'a H, poly: &HeckePolynomial, k: u32) -> Self {
        let weights = poly
            .terms
            .iter()
            .map(|t| {
                let p = BigRational::from_integer(BigInt::from(t.p));
                (rat_pow(&p, 1 - 2 * k as i64), p.recip())
            })
            .collect();
        HeckeEvaluator { h, poly: poly.clone(), weights, base: HashMap::new(), memo: HashMap::new() }
    }

    /// Distinct base points (mod 1) needed to evaluate at `xs`.
    pub fn leaves(&self, xs: &[RationalPoint]) -> Result<Vec<RationalPoint>> {
        let mut seen = HashSet::new();
        let mut leaves = HashSet::new();
        for &x in xs {
            self.collect(0, reduce(x), &mut seen, &mut leaves)?;
        }
        let mut out: Vec<_> = leaves.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    fn collect(
        &self,
        i: usize,
        x: RationalPoint,
        seen: &mut HashSet<(usize, RationalPoint)>,
        leaves: &mut HashSet<RationalPoint>,
    ) -> Result<()> {
        if !seen.insert((i, x)) {
            return Ok(());
        }
        let Some(term) = self.poly.terms.get(i) else {
            leaves.insert(x);
            return Ok(());
        };
        // T_p^j at x needs the next factor at every point j levels down
        let mut frontier = vec![x];
        for (j, c) in term.coeffs.iter().enumerate() {
            if !c.is_zero() {
                for &y in &frontier {
                    self.collect(i + 1, y, seen, leaves)?;
                }
            }
            if j + 1 < term.coeffs.len() {
                let mut next = HashSet::new();
                for &y in &frontier {
                    next.extend(self.children(term.p, y)?);
                }
                frontier = next.into_iter().collect();
            }
        }
        Ok(())
    }

    fn children(&self, p: u64, x: RationalPoint) -> Result<Vec<RationalPoint>> {
        let p = p as i128;
        let mut out = Vec::with_capacity(p as usize + 1);
        out.push(reduce(RationalPoint::new(x.p * p, x.q)?));
        for b in 0..p {
            out.push(reduce(RationalPoint::new(x.p + b * x.q, x.q * p)?));
        }
        Ok(out)
    }

    /// Evaluates all leaves first (in parallel when enabled), then combines.
    pub fn eval_many(&mut self, xs: &[RationalPoint]) -> Result<Vec<BigRational>> {
        let leaves: Vec<_> = self.leaves(xs)?.into_iter().filter(|y| !self.base.contains_key(y)).collect();
        let h = self.h;
        let vals = exec::map(&leaves, |&y| h.eval(y));
        for (y, v) in leaves.into_iter().zip(vals) {
            self.base.insert(y, v?);
        }
        xs.iter().map(|&x| self.value(0, reduce(x))).collect()
    }

    pub fn eval(&mut self, x: RationalPoint) -> Result<BigRational> {
        Ok(self.eval_many(&[x])?.remove(0))
    }

    fn value(&mut self, i: usize, x: RationalPoint) -> Result<BigRational> {
        if i == self.poly.terms.len() {
            return match self.base.get(&x) {
                Some(v) => Ok(v.clone()),
                None => {
                    let v = self.h.eval(x)?;
                    self.base.insert(x, v.clone());
                    Ok(v)
                }
            };
        }
        let coeffs = self.poly.terms[i].coeffs.clone();
        let mut acc = BigRational::zero();
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * self.power(i, j, x)?;
            }
        }
        Ok(acc)
    }

    /// `(T_p^j g_{i+1})(x)` where `g_{i+1}` is the tail of the product.
    fn power(&mut self, i: usize, j: usize, x: RationalPoint) -> Result<BigRational> {
        if let Some(v) = self.memo.get(&(i, j, x)) {
            return Ok(v.clone());
        }
        let v = if j == 0 {
            self.value(i + 1, x)?
        } else {
            let p = self.poly.terms[i].p;
            let kids = self.children(p, x)?;
            let (w_up, w_down) = self.weights[i].clone();
            let mut acc = w_up * self.power(i, j - 1, kids[0])?;
            let mut avg = BigRational::zero();
            for &y in &kids[1..] {
                avg += self.power(i, j - 1, y)?;
            }
            acc += w_down * avg;
            acc
        };
        self.memo.insert((i, j, x), v.clone());
        Ok(v)
    }
}

/// `(T_p h)(x)`.
pub fn apply_tp<H: PeriodicFunction>(h: &H, p: u64, k: u32, x: &BigRational) -> Result<BigRational> {
    if !is_prime_u64(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let poly = HeckePolynomial { terms: vec![HeckeTerm { p, coeffs: vec![BigRational::zero(), BigRational::one()] }] };
    HeckeEvaluator::new(h, &poly, k).eval(RationalPoint::from_big(x)?)
}

/// `poly(T) h` at each of `xs`.
pub fn apply_polynomial<H: PeriodicFunction>(
    h: &H,
    poly: &HeckePolynomial,
    k: u32,
    xs: &[BigRational],
) -> Result<Vec<BigRational>> {
    let pts = xs.iter().map(RationalPoint::from_big).collect::<Result<Vec<_>>>()?;
    HeckeEvaluator::new(h, poly, k).eval_many(&pts)
}

/// Outcome of the constancy test, with every sampled value for audit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VanishingReport {
    pub vanishing: bool,
    pub samples: Vec<BigRational>,
    pub values: Vec<BigRational>,
}

impl VanishingReport {
    pub fn common_value(&self) -> Option<&BigRational> {
        if self.vanishing {
            self.values.first()
        } else {
            None
        }
    }
}

/// Exact constancy test of `poly(T)` applied to the script polynomial.
/// Validates the full hypotheses on `params` and `poly`.
pub fn detect_vanishing(
    params: &LocalPolyParams,
    poly: &HeckePolynomial,
    samples: &[BigRational],
) -> Result<VanishingReport> {
    LocalPolyParams::new(params.k, params.n, params.d, params.d0)?;
    detect_vanishing_unchecked(params, poly, samples)
}

/// As [`detect_vanishing`] without the admissibility checks on `(D, D₀)`.
pub fn detect_vanishing_unchecked(
    params: &LocalPolyParams,
    poly: &HeckePolynomial,
    samples: &[BigRational],
) -> Result<VanishingReport> {
    poly.validate(params.n)?;
    let need = 2 * params.k as usize - 1;
    if samples.len() < need {
        return Err(Error::domain(format!("need at least {need} samples, got {}", samples.len())));
    }
    let pts = samples.iter().map(RationalPoint::from_big).collect::<Result<Vec<_>>>()?;
    let distinct: HashSet<_> = pts.iter().map(|&x| reduce(x)).collect();
    if distinct.len() != pts.len() {
        return Err(Error::domain("samples must be pairwise inequivalent modulo 1"));
    }
    let lp = LocalPolynomial::new(params)?;
    let values = HeckeEvaluator::new(&lp, poly, params.k).eval_many(&pts)?;
    let vanishing = values.windows(2).all(|w| w[0] == w[1]);
    Ok(VanishingReport { vanishing, samples: samples.to_vec(), values })
}

/// True when the points lie on one polynomial of degree at most `degree`:
/// interpolate through the first `degree + 1` and check the rest exactly.
pub fn fits_polynomial(points: &[(BigRational, BigRational)], degree: usize) -> bool {
    if points.len() <= degree + 1 {
        return true;
    }
    let (basis, rest) = points.split_at(degree + 1);
    rest.iter().all(|(x, y)| {
        let mut acc = BigRational::zero();
        for (i, (xi, yi)) in basis.iter().enumerate() {
            let mut term = yi.clone();
            for (j, (xj, _)) in basis.iter().enumerate() {
                if i != j {
                    term *= (x - xj) / (xi - xj);
                }
            }
            acc += term;
        }
        &acc == y
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::rat;

    fn constant(c: BigRational) -> FnPeriodic<impl Fn(RationalPoint) -> Result<BigRational> + Sync> {
        FnPeriodic(move |_| Ok(c.clone()))
    }

    #[test]
    fn constants_scale() {
        let h = constant(rat(5, 1));
        for k in [2u32, 3] {
            for p in [2u64, 3, 13] {
                let v = apply_tp(&h, p, k, &rat(2, 7)).unwrap();
                let expect = rat(5, 1) * (rat_pow(&rat(p as i64, 1), 1 - 2 * k as i64) + rat(1, 1));
                assert_eq!(v, expect);
            }
        }
        let poly = HeckePolynomial::preset("level22").unwrap();
        let v = apply_polynomial(&h, &poly, 2, &[rat(1, 2)]).unwrap();
        assert_eq!(v[0], rat(5, 1) * poly.constant_multiplier(2));
    }

    #[test]
    fn identity_is_identity() {
        let h = FnPeriodic(|x: RationalPoint| Ok(rat(x.p as i64, x.q as i64) * rat(3, 1)));
        let v = apply_polynomial(&h, &HeckePolynomial::identity(), 2, &[rat(2, 5)]).unwrap();
        assert_eq!(v[0], rat(6, 5));
    }

    #[test]
    fn fan_out_of_presets() {
        assert_eq!(HeckePolynomial::preset("level22").unwrap().fan_out(), 196 * 4 * 6);
        assert_eq!(HeckePolynomial::preset("level15").unwrap().fan_out(), 12 * 8);
    }

    #[test]
    fn parsers() {
        let p = HeckePolynomial::parse_factors("11:32/1331, 7:-24/343").unwrap();
        assert_eq!(p, HeckePolynomial::preset("level15").unwrap());
        let e = HeckePolynomial::parse_expanded("13;400/4826809,-80/2197,1").unwrap();
        assert_eq!(e.terms[0], HeckePolynomial::preset("level22").unwrap().terms[0]);
        assert!(HeckePolynomial::parse_factors("11-3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(HeckePolynomial::preset("level15").unwrap().validate(15).is_ok());
        assert!(HeckePolynomial::parse_factors("5:1").unwrap().validate(15).is_err());
    }

    #[test]
    fn fits_polynomial_detects_quadratics() {
        let pts: Vec<_> = (1..6).map(|i| (rat(i, 3), rat(i * i, 9) - rat(1, 1))).collect();
        assert!(fits_polynomial(&pts, 2));
        assert!(!fits_polynomial(&pts, 1));
    }
}
