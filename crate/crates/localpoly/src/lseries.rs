//! Twisted central values `L(f ⊗ χ_D, k)` of a weight-`2k` newform from
//! bundled prime-coefficient data.
//!
//! With `Q = N D²` and `Λ(s) = (√Q/2π)^s Γ(s) L(s) = ε Λ(2k - s)`, splitting
//! the Mellin integral at `t` gives
//!
//! `Λ(s) = Σ a(n)χ_D(n) [(√Q/2πn)^s Γ(s, 2πnt/√Q) + ε (√Q/2πn)^{2k-s} Γ(2k-s, 2πn/(t√Q))]`
//!
//! for every `t > 0`. The spread between `t = 1` and `t = t_alt` is the
//! error estimate. The sign `ε` is taken to be `+1`; [`twisted_l`] refuses
//! twists whose Kronecker conditions do not guarantee it.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::Read;
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use serde::{Deserialize, Serialize};

use crate::analytic::special::upper_gamma;
use crate::error::{Error, Result};
use crate::exec;
use crate::nt::{factorize_u64, is_fundamental_discriminant, kronecker_i128, SpfSieve};

/// Absolute threshold below which an L-value counts as zero.
pub const ZERO_TOL: f64 = 1e-4;

/// Prime coefficients of a newform in the fixture format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewformData {
    pub label: String,
    pub level: u64,
    /// The weight `2k`.
    pub weight: u32,
    /// Atkin–Lehner eigenvalues keyed by the primes dividing the level.
    pub atkin_lehner: BTreeMap<String, i8>,
    /// `[p, a_p]` for every prime up to the largest listed.
    pub ap: Vec<(u64, i64)>,
}

impl NewformData {
    pub fn k(&self) -> u32 {
        self.weight / 2
    }

    pub fn p_max(&self) -> u64 {
        self.ap.last().map_or(1, |&(p, _)| p)
    }

    pub fn atkin_lehner_sign(&self, ell: u64) -> Option<i8> {
        self.atkin_lehner.get(&ell.to_string()).copied()
    }

    /// Structure checks plus the Deligne bound `|a_p| ≤ 2p^{(2k-1)/2}`.
    pub fn validate(&self) -> Result<()> {
        if self.level == 0 {
            return Err(Error::data("level must be positive"));
        }
        if self.weight < 2 || self.weight % 2 == 1 {
            return Err(Error::data(format!("weight {} must be even and at least 2", self.weight)));
        }
        let bad = factorize_u64(self.level).primes().collect::<Vec<_>>();
        for ell in &bad {
            match self.atkin_lehner_sign(*ell) {
                Some(1) | Some(-1) => {}
                Some(w) => return Err(Error::data(format!("Atkin–Lehner sign {w} at {ell} is not ±1"))),
                None => return Err(Error::data(format!("missing Atkin–Lehner sign at {ell}"))),
            }
        }
        if self.atkin_lehner.len() != bad.len() {
            return Err(Error::data("Atkin–Lehner signs given at primes not dividing the level"));
        }
        let sieve = SpfSieve::new(self.p_max() as usize);
        let mut listed = self.ap.iter();
        for p in sieve.primes() {
            match listed.next() {
                Some(&(q, _)) if q == p => {}
                Some(&(q, _)) => return Err(Error::data(format!("expected a_p for p = {p}, found p = {q}"))),
                None => unreachable!("p_max is the last listed prime"),
            }
        }
        let w = self.weight;
        for &(p, a) in &self.ap {
            // a_p² ≤ 4 p^{2k-1}, exactly.
            let bound = 4 * (p as i128).checked_pow(w - 1).ok_or(Error::Overflow("Deligne bound"))?;
            if (a as i128) * (a as i128) > bound {
                return Err(Error::data(format!("a_{p} = {a} violates the Deligne bound")));
            }
        }
        Ok(())
    }

    /// Parses JSON, transparently gunzipping when the gzip magic is present.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let data: NewformData = if bytes.starts_with(&[0x1f, 0x8b]) {
            let mut s = String::new();
            GzDecoder::new(bytes).read_to_string(&mut s)?;
            serde_json::from_str(&s)?
        } else {
            serde_json::from_slice(bytes)?
        };
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Reads and validates a fixture file, gzipped or not.
pub fn ingest_coefficients(path: &Path) -> Result<NewformData> {
    NewformData::from_bytes(&std::fs::read(path)?)
}

pub fn export_coefficients(data: &NewformData, path: &Path) -> Result<()> {
    std::fs::write(path, data.to_json()?)?;
    Ok(())
}

/// Directory holding the bundled fixtures; `LOCALPOLY_FIXTURES` overrides it.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os("LOCALPOLY_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/newforms"))
}

/// Bundled fixture for a label such as `7.4.a.a`, as `.json` or `.json.gz`.
pub fn load_fixture(label: &str) -> Result<NewformData> {
    let dir = fixture_dir();
    for name in [format!("{label}.json"), format!("{label}.json.gz")] {
        let path = dir.join(name);
        if path.exists() {
            return ingest_coefficients(&path);
        }
    }
    Err(Error::data(format!("no fixture for {label} in {}", dir.display())))
}

/// Labels of the newforms isolated by the shipped Hecke presets.
pub fn fixture_label_for_level(level: u64) -> Option<&'static str> {
    match level {
        7 => Some("7.4.a.a"),
        15 => Some("15.4.a.b"),
        22 => Some("22.4.a.b"),
        _ => None,
    }
}

/// `a(n)` for `1 ≤ n ≤ len`.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub level: u64,
    pub weight: u32,
    a: Vec<i128>,
}

impl CoeffTable {
    pub fn len(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> i128 {
        self.a[n]
    }

    /// `a(1), …, a(n)` as floats.
    pub fn to_f64(&self, n: usize) -> Vec<f64> {
        self.a[1..=n.min(self.len())].iter().map(|&v| v as f64).collect()
    }
}

/// Expands `a(n)` for `n ≤ x` by multiplicativity and the Hecke recursion
/// `a(p^{r+1}) = a_p a(p^r) - p^{2k-1} a(p^{r-1})` (`a(p^r) = a_p^r` for `p | N`).
pub fn expand_coeffs(data: &NewformData, x: usize) -> Result<CoeffTable> {
    if x as u64 > data.p_max() {
        let sieve = SpfSieve::new(x);
        let missing = sieve.primes().find(|&p| p > data.p_max());
        if let Some(p) = missing {
            return Err(Error::data(format!("missing a_p for p = {p} (data ends at {})", data.p_max())));
        }
    }
    let ap: BTreeMap<u64, i128> = data.ap.iter().map(|&(p, a)| (p, a as i128)).collect();
    let sieve = SpfSieve::new(x.max(1));
    let w = data.weight;
    let mut a = vec![0i128; x + 1];
    if x >= 1 {
        a[1] = 1;
    }
    for n in 2..=x {
        let (p, e) = sieve.factorize(n as u64).factors[0];
        let pe = (p as usize).pow(e);
        a[n] = if pe == n {
            let a_p = ap[&p];
            let prev = a[n / p as usize];
            if data.level.is_multiple_of(p) {
                a_p * prev
            } else {
                let before = if e >= 2 { a[n / (p * p) as usize] } else { 0 };
                a_p.checked_mul(prev)
                    .and_then(|u| (p as i128).pow(w - 1).checked_mul(before).and_then(|v| u.checked_sub(v)))
                    .ok_or(Error::Overflow("coefficient recursion"))?
            }
        } else {
            a[pe].checked_mul(a[n / pe]).ok_or(Error::Overflow("coefficient product"))?
        };
    }
    Ok(CoeffTable { level: data.level, weight: w, a })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LSeriesOptions {
    /// Sums stop once every incomplete-Γ argument exceeds this.
    pub cutoff: f64,
    /// Second splitting point used for the error estimate.
    pub t_alt: f64,
}

impl Default for LSeriesOptions {
    fn default() -> Self {
        LSeriesOptions { cutoff: 40.0, t_alt: 1.2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwistedLValue {
    pub d: i64,
    pub value: f64,
    /// `|L_{t=1} - L_{t=t_alt}|` plus the truncation bound.
    pub error: f64,
    pub conductor: u128,
    pub depth: usize,
}

impl TwistedLValue {
    /// Zero when below `tol`, or below ten error estimates if those are larger.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.value.abs() < tol.max(10.0 * self.error)
    }
}

/// Checks that `D` is a fundamental discriminant coprime to `N` with
/// `(D/ℓ) = w_ℓ` at every `ℓ | N`, which forces the twisted sign to be `+1`.
pub fn check_admissible(data: &NewformData, d: i64) -> Result<()> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::domain(format!("{d} is not a fundamental discriminant")));
    }
    if num_integer::gcd(d.unsigned_abs(), data.level) != 1 {
        return Err(Error::domain(format!("D = {d} is not coprime to N = {}", data.level)));
    }
    for ell in factorize_u64(data.level).primes() {
        let w = data.atkin_lehner_sign(ell).ok_or_else(|| Error::data(format!("missing sign at {ell}")))?;
        let chi = kronecker_i128(d as i128, ell as i128);
        if chi != w {
            return Err(Error::domain(format!("(D/{ell}) = {chi} differs from w_{ell} = {w}; the sign is not +1")));
        }
    }
    Ok(())
}

/// Coefficients needed for `twisted_l` at this twist.
pub fn required_depth(level: u64, d: i64, opts: &LSeriesOptions) -> usize {
    let sqrt_q = (level as f64).sqrt() * d.unsigned_abs() as f64;
    let stretch = opts.t_alt.max(1.0 / opts.t_alt);
    (opts.cutoff * stretch * sqrt_q / TAU).ceil() as usize
}

struct Twist<'a> {
    table: &'a CoeffTable,
    chi: Vec<i8>,
    sqrt_q: f64,
    k: f64,
    w: f64,
}

impl<'a> Twist<'a> {
    fn new(table: &'a CoeffTable, d: i64, depth: usize) -> Self {
        let chi = exec::map_range(depth + 1, |n| if n == 0 { 0 } else { kronecker_i128(d as i128, n as i128) });
        let sqrt_q = (table.level as f64).sqrt() * d.unsigned_abs() as f64;
        let w = table.weight as f64;
        Twist { table, chi, sqrt_q, k: w / 2.0, w }
    }

    /// `Λ(s)` with splitting point `t`, in blocks combined in a fixed order.
    fn lambda(&self, s: f64, t: f64) -> f64 {
        let depth = self.chi.len() - 1;
        let block = 4096;
        let blocks = depth.div_ceil(block);
        let scale = self.sqrt_q / TAU;
        let partials = exec::map_range(blocks, |b| {
            let mut acc = 0.0;
            for n in (b * block + 1)..=((b + 1) * block).min(depth) {
                if self.chi[n] == 0 {
                    continue;
                }
                let an = self.table.get(n) as f64 * self.chi[n] as f64;
                let x = n as f64 / scale;
                let u = scale.powf(s) * (n as f64).powf(-s) * upper_gamma(s, x * t);
                let v = scale.powf(self.w - s) * (n as f64).powf(s - self.w) * upper_gamma(self.w - s, x / t);
                acc += an * (u + v);
            }
            acc
        });
        let (mut total, mut comp) = (0.0, 0.0);
        for p in partials {
            let y = p - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        }
        total
    }

    /// `L(s) = Λ(s)(2π/√Q)^s/Γ(s)`.
    fn to_l(&self, s: f64, lambda: f64) -> f64 {
        lambda * (TAU / self.sqrt_q).powf(s) / statrs::function::gamma::gamma(s)
    }

    /// Bound on the terms beyond the depth, from `|a(n)| ≤ d(n) n^{k-1/2} ≤ 2n^k`
    /// and `Σ_{n>X} Γ(s, cn) ≤ Γ(s+1, cX)/c`.
    fn tail(&self, s: f64, t: f64) -> f64 {
        let depth = (self.chi.len() - 1) as f64;
        let scale = self.sqrt_q / TAU;
        let piece = |s: f64, c: f64| 2.0 * scale.powf(s) * depth.powf((self.k - s).max(0.0)) * upper_gamma(s + 1.0, c * depth) / c;
        piece(s, t / scale) + piece(self.w - s, 1.0 / (t * scale))
    }
}

/// `L(f ⊗ χ_D, k)` with an empirical error estimate.
pub fn twisted_l(data: &NewformData, table: &CoeffTable, d: i64, opts: &LSeriesOptions) -> Result<TwistedLValue> {
    check_admissible(data, d)?;
    if table.level != data.level || table.weight != data.weight {
        return Err(Error::validation("coefficient table does not belong to this newform"));
    }
    let depth = required_depth(data.level, d, opts);
    if table.len() < depth {
        return Err(Error::data(format!("{} coefficients available, the twist by {d} needs {depth}", table.len())));
    }
    let tw = Twist::new(table, d, depth);
    let k = tw.k;
    let main = tw.to_l(k, tw.lambda(k, 1.0));
    let alt = tw.to_l(k, tw.lambda(k, opts.t_alt));
    let tail = tw.to_l(k, tw.tail(k, 1.0).max(tw.tail(k, opts.t_alt)));
    Ok(TwistedLValue {
        d,
        value: main,
        error: (main - alt).abs() + tail,
        conductor: data.level as u128 * (d as i128 * d as i128) as u128,
        depth,
    })
}

/// Expands enough coefficients for `d` and evaluates [`twisted_l`].
pub fn twisted_l_from_data(data: &NewformData, d: i64, opts: &LSeriesOptions) -> Result<TwistedLValue> {
    check_admissible(data, d)?;
    let table = expand_coeffs(data, required_depth(data.level, d, opts))?;
    twisted_l(data, &table, d, opts)
}

/// `Λ(k+h)` split at `t_alt` against `Λ(k-h)` split at 1, both rescaled by
/// `(2π/√Q)^k/Γ(k)`; equal when the sign is `+1` and the data is right.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FunctionalEquationCheck {
    pub above: f64,
    pub below: f64,
    pub discrepancy: f64,
    pub error: f64,
}

pub fn functional_equation_check(
    data: &NewformData,
    table: &CoeffTable,
    d: i64,
    h: f64,
    opts: &LSeriesOptions,
) -> Result<FunctionalEquationCheck> {
    check_admissible(data, d)?;
    let depth = required_depth(data.level, d, opts);
    if table.len() < depth {
        return Err(Error::data(format!("{} coefficients available, the twist by {d} needs {depth}", table.len())));
    }
    let tw = Twist::new(table, d, depth);
    let k = tw.k;
    let above = tw.to_l(k, tw.lambda(k + h, opts.t_alt));
    let below = tw.to_l(k, tw.lambda(k - h, 1.0));
    let error = tw.to_l(k, tw.tail(k + h, opts.t_alt) + tw.tail(k - h, 1.0)) + 1e-12 * above.abs().max(below.abs());
    Ok(FunctionalEquationCheck { above, below, discrepancy: (above - below).abs(), error })
}
