use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::nt::{divisors, is_square_i128, is_squarefree, isqrt_u128};

use super::{GL2Matrix, QuadForm};

/// Largest denominator accepted by the fixed-width enumerators.
const MAX_DENOMINATOR: i128 = 1 << 48;

/// A rational `p/q` in lowest terms with `q > 0`, stored in machine integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub p: i128,
    pub q: i128,
}

impl RationalPoint {
    pub fn new(p: i128, q: i128) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("zero denominator"));
        }
        let g = crate::nt::gcd_i128(p, q);
        let s = q.signum();
        let pt = RationalPoint { p: s * p / g, q: s * q / g };
        if pt.q > MAX_DENOMINATOR || pt.p.abs() > MAX_DENOMINATOR * MAX_DENOMINATOR {
            return Err(Error::Overflow("rational point too large"));
        }
        Ok(pt)
    }

    pub fn from_big(x: &BigRational) -> Result<Self> {
        let p = x.numer().to_i128().ok_or(Error::Overflow("numerator"))?;
        let q = x.denom().to_i128().ok_or(Error::Overflow("denominator"))?;
        RationalPoint::new(p, q)
    }

    pub fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    /// Continued fraction quotients `[a₀; a₁, …, a_m]` in canonical form.
    pub fn quotients(self) -> Vec<i128> {
        let (mut p, mut q) = (self.p, self.q);
        let mut out = Vec::new();
        loop {
            let a = p.div_euclid(q);
            out.push(a);
            let r = p - a * q;
            if r == 0 {
                break;
            }
            p = q;
            q = r;
        }
        out
    }

    /// Convergents `c_{-1} = 1/0, c_0, …, c_m = x` as `(p, q)` pairs.
    pub fn convergents(self) -> (Vec<i128>, Vec<(i128, i128)>) {
        let quots = self.quotients();
        let mut conv = Vec::with_capacity(quots.len() + 1);
        conv.push((1, 0));
        let (mut pm2, mut qm2, mut pm1, mut qm1) = (0i128, 1i128, 1i128, 0i128);
        for &a in &quots {
            let (pn, qn) = (a * pm1 + pm2, a * qm1 + qm2);
            conv.push((pn, qn));
            (pm2, qm2, pm1, qm1) = (pm1, qm1, pn, qn);
        }
        (quots, conv)
    }
}

/// Input of the straddling enumerators: forms `[a, b, c]` of discriminant `Δ`
/// with `N | a` and `a < 0 < Q(x, 1)`.
#[derive(Clone, Debug)]
pub struct StraddlingQuery {
    pub delta: i128,
    pub n: u64,
    pub x: BigRational,
}

impl StraddlingQuery {
    pub fn new(delta: i128, n: u64, x: BigRational) -> Result<Self> {
        validate_delta(delta)?;
        if n == 0 || !is_squarefree(n) {
            return Err(Error::domain(format!("N = {n} is not a positive square-free integer")));
        }
        Ok(StraddlingQuery { delta, n, x })
    }
}

fn validate_delta(delta: i128) -> Result<()> {
    if delta <= 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!("{delta} is not a positive discriminant")));
    }
    if is_square_i128(delta) {
        return Err(Error::domain(format!("discriminant {delta} is a square")));
    }
    Ok(())
}

/// All `[a, b, c]` of discriminant `Δ` with `a < 0 < c` and `N | a`, sorted.
pub fn enumerate_simple_forms(delta: i128, n: u64) -> Result<Vec<QuadForm>> {
    validate_delta(delta)?;
    let r = isqrt_u128(delta as u128) as i128;
    let mut out = Vec::new();
    for b in -r..=r {
        if (b - delta).rem_euclid(2) != 0 || b * b >= delta {
            continue;
        }
        let m = (delta - b * b) / 4;
        let m = u64::try_from(m).map_err(|_| Error::Overflow("simple form product"))?;
        for d in divisors(m) {
            if d % n == 0 {
                out.push(QuadForm::new(-(d as i128), b, (m / d) as i128));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Window-scan enumeration, used as the reference for the continued-fraction path.
pub fn enumerate_straddling_oracle(query: &StraddlingQuery) -> Result<Vec<QuadForm>> {
    let StraddlingQuery { delta, n, ref x } = *query;
    let pt = RationalPoint::from_big(x)?;
    let (p, q) = (pt.p, pt.q);
    let dq2 = delta.checked_mul(q * q).ok_or(Error::Overflow("Δq²"))?;
    let root = isqrt_u128(dq2 as u128) as i128;
    let n = n as i128;
    let mut out = Vec::new();
    let mut a = -n;
    while 4 * -a <= dq2 {
        // |bq + 2ap| < q√Δ
        let centre = -2 * a * p;
        let lo = (centre - root).div_euclid(q) - 1;
        let hi = (centre + root).div_euclid(q) + 1;
        for b in lo..=hi {
            let w = b * q + 2 * a * p;
            if w * w >= dq2 {
                continue;
            }
            let num = b * b - delta;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if a * p * p + b * p * q + c * q * q >= 1 {
                out.push(QuadForm::new(a, b, c));
            }
        }
        a -= n;
    }
    out.sort_unstable();
    Ok(out)
}

/// A straddling form reached from a simple form by continued-fraction transport.
#[derive(Clone, Copy, Debug)]
pub struct Transported {
    /// Index into the simple-form slice.
    pub simple: usize,
    /// Edge index `i`, joining convergents `c_{i-1}` and `c_i`.
    pub edge: usize,
    /// `q² · Q(x, 1) = Q(p, q) > 0`.
    pub value: i128,
    /// `Q = Q₀ ∘ transport`.
    pub transport: GL2Matrix,
}

impl Transported {
    pub fn form(&self, simple: &[QuadForm]) -> QuadForm {
        simple[self.simple].apply_unchecked(&self.transport)
    }
}

/// Visits every form `Q` with `N | a_Q` and `a_Q < 0 < Q(x, 1)` exactly once.
///
/// `simple` must be the level-free simple forms of `Δ`. Each straddling form is
/// the transport of a unique simple form along the unique convergent edge
/// `(c_{i-1}, c_i)` at which `Q` changes sign from negative to positive for the
/// last time (`Q(c_{i+1}) > 0`, or `i = m`).
pub fn for_each_straddling<F>(delta: i128, n: u64, x: RationalPoint, simple: &[QuadForm], mut visit: F) -> Result<()>
where
    F: FnMut(Transported),
{
    validate_delta(delta)?;
    let (quots, conv) = x.convergents();
    let m = quots.len() - 1;
    let n = n as i128;
    let root = isqrt_u128(delta as u128) as i128 + 1;
    let (p, q) = (x.p, x.q);
    for i in 0..=m {
        let (p0, q0) = conv[i];
        let (p1, q1) = conv[i + 1];
        let det = p0 * q1 - p1 * q0;
        let next = if i < m { Some(quots[i + 1]) } else { None };
        let u = det * (q1 * p - p1 * q);
        let v = det * (-q0 * p + p0 * q);
        // Q₀ ∘ M⁻¹ with M = ((p0, p1), (q0, q1))
        let transport = GL2Matrix::new(det * q1, -det * p1, -det * q0, det * p0);
        for (idx, f) in simple.iter().enumerate() {
            if let Some(t) = next {
                // Q(c_{i+1}) = Q₀(1, t); positive once t exceeds the larger root
                if t <= root && f.a + f.b * t + f.c * t * t <= 0 {
                    continue;
                }
            }
            let a_q = f.a * q1 * q1 - f.b * q1 * q0 + f.c * q0 * q0;
            if a_q >= 0 || a_q % n != 0 {
                continue;
            }
            let value = f.a * u * u + f.b * u * v + f.c * v * v;
            debug_assert!(value > 0);
            visit(Transported { simple: idx, edge: i, value, transport });
        }
    }
    Ok(())
}

/// Continued-fraction enumeration; same set as [`enumerate_straddling_oracle`].
pub fn enumerate_straddling_fast(query: &StraddlingQuery) -> Result<Vec<QuadForm>> {
    let pt = RationalPoint::from_big(&query.x)?;
    let simple = super::simple_forms_cached(query.delta)?;
    let mut out = Vec::new();
    for_each_straddling(query.delta, query.n, pt, &simple, |t| out.push(t.form(&simple)))?;
    let before = out.len();
    out.sort_unstable();
    out.dedup();
    debug_assert_eq!(before, out.len(), "edge rule produced a duplicate");
    Ok(out)
}

/// `true` if `x` lies strictly between the roots of `Q(·, 1)` where `Q` is
/// positive; convenience for tests and diagnostics.
pub fn straddles(q: &QuadForm, x: &BigRational) -> bool {
    let (a, b, c) = (BigInt::from(q.a), BigInt::from(q.b), BigInt::from(q.c));
    let val = x * x * BigRational::from(a) + x * BigRational::from(b) + BigRational::from(c);
    q.a < 0 && val.is_positive()
}
