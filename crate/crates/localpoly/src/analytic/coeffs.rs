//! The cusp form `f_{k,N,D,D₀}(z) = Σ χ_{D₀}(Q) Q(z,1)^{-k}` and its Fourier
//! coefficients.
//!
//! Two routes to `c(n)`:
//! - per translation class, the `b`-sum is 1-periodic and its Fourier
//!   coefficients are contour integrals `∫ (a u² - Δ/4a)^{-k} e(-nu) du`,
//!   evaluated exactly by residues at the two real poles (`fourier_coefficients`);
//! - a length-`M` DFT of `f` sampled on a horizontal line (`extract_coeffs`).
//!
//! With the same `a_bound` both routes compute the same truncated form, so
//! they agree up to rounding and the `e^{2πny}` amplification of the DFT.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::orbits::{Orbit, OrbitTable};
use super::special::e;
use crate::error::{Error, Result};
use crate::exec;
use crate::local_poly::LocalPolyParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailMode {
    None,
    /// Largest deviation of the partial sums over the last decade of `a`.
    LastDecade,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Forms with `|a| > a_bound` are dropped.
    pub a_bound: u64,
    /// Direct `b`-sums run over `|Re z + b/2a| ≤ window`; the rest of each
    /// class is added from the leading-order integral.
    pub window: u32,
    pub tail: TailMode,
}

impl TruncationPolicy {
    /// Coefficient extraction by residues: `a_bound = 10⁵·N`.
    pub fn coefficients(n: u64) -> Self {
        TruncationPolicy { a_bound: 100_000 * n, window: 200, tail: TailMode::LastDecade }
    }

    /// Pointwise sums (`eval_f`, `𝓕`), where every class costs `2·window` terms.
    pub fn pointwise(n: u64) -> Self {
        TruncationPolicy { a_bound: 200 * n, window: 200, tail: TailMode::LastDecade }
    }

    pub fn check(&self, params: &LocalPolyParams) -> Result<()> {
        if self.a_bound < params.n {
            return Err(Error::validation(format!("a_bound {} is below the level {}", self.a_bound, params.n)));
        }
        if self.window == 0 {
            return Err(Error::validation("window must be positive"));
        }
        Ok(())
    }
}

/// Number of blocks used for partial sums over `a`.
const BLOCKS: usize = 200;

/// Blocked, compensated summation over the classes of `table`; returns the
/// totals and, per component, the last-decade deviation of the partial sums.
pub(crate) fn sum_over_orbits<F>(table: &OrbitTable, width: usize, mode: TailMode, f: F) -> (Vec<Complex64>, Vec<f64>)
where
    F: Fn(&Orbit, &mut [Complex64]) + Sync + Send,
{
    let blocks = table.blocks(BLOCKS);
    let partials = exec::map(&blocks, |block| {
        let mut acc = vec![Complex64::new(0.0, 0.0); width];
        let mut buf = vec![Complex64::new(0.0, 0.0); width];
        for o in block.iter() {
            buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            f(o, &mut buf);
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += b;
            }
        }
        (block.last().map_or(0, |o| o.a), acc)
    });
    let mut total = vec![Complex64::new(0.0, 0.0); width];
    let mut comp = vec![Complex64::new(0.0, 0.0); width];
    let mut history = Vec::with_capacity(partials.len());
    for (a_end, block) in &partials {
        for i in 0..width {
            let y = block[i] - comp[i];
            let t = total[i] + y;
            comp[i] = (t - total[i]) - y;
            total[i] = t;
        }
        history.push((*a_end, total.clone()));
    }
    let mut tail = vec![0.0; width];
    if mode == TailMode::LastDecade {
        let start = table.a_bound / 10;
        for (a_end, partial) in &history {
            if *a_end < start {
                continue;
            }
            for i in 0..width {
                tail[i] = f64::max(tail[i], (partial[i] - total[i]).norm());
            }
        }
    }
    (total, tail)
}

/// `∫_{ℝ+iy} (u² - β²)^{-k} e(-nu) du` for `n ≥ 1`: residues at `±β`, or for
/// `2πnβ < 1`, where the two residues cancel to many digits, the expansion
/// `-2πi Σ_j C(k+j-1, j) β^{2j} (-2πin)^{2k+2j-1}/(2k+2j-1)!` at infinity.
pub fn orbit_integral(k: u32, n: u64, beta: f64) -> Complex64 {
    if TAU * n as f64 * beta < 1.0 {
        orbit_integral_series(k, n, beta)
    } else {
        orbit_integral_residues(k, n, beta)
    }
}

fn orbit_integral_residues(k: u32, n: u64, beta: f64) -> Complex64 {
    let k = k as i32;
    let mut fact = 1.0;
    for j in 1..k {
        fact *= j as f64;
    }
    let w = Complex64::new(0.0, -TAU * n as f64);
    let residue = |u0: f64, u1: f64| -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        let mut rising = 1.0;
        for j in 0..k {
            if j > 0 {
                binom *= (k - j) as f64 / j as f64;
                rising *= (k + j - 1) as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += w.powi(k - 1 - j) * (binom * sign * rising * (u0 - u1).powi(-k - j));
        }
        sum * e(-(n as f64) * u0) / fact
    };
    Complex64::new(0.0, -TAU) * (residue(beta, -beta) + residue(-beta, beta))
}

fn orbit_integral_series(k: u32, n: u64, beta: f64) -> Complex64 {
    let k = k as i32;
    let w = Complex64::new(0.0, -TAU * n as f64);
    // j = 0 term: w^{2k-1}/(2k-1)!.
    let mut term = Complex64::new(1.0, 0.0);
    for i in 1..2 * k {
        term *= w / i as f64;
    }
    let mut sum = term;
    for j in 1..60 {
        // Ratio of consecutive terms: (k+j-1)/j · β² w² / ((2k+2j-2)(2k+2j-1)).
        let r = (k + j - 1) as f64 / j as f64 * beta * beta / ((2 * k + 2 * j - 2) as f64 * (2 * k + 2 * j - 1) as f64);
        term *= w * w * r;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    Complex64::new(0.0, -TAU) * sum
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Extraction {
    /// Residue formula per translation class.
    Orbit,
    /// DFT of samples at height `y`.
    Dft { y: f64, samples: usize },
}

#[derive(Clone, Debug)]
pub struct FourierCoeffs {
    pub params: LocalPolyParams,
    pub a_bound: u64,
    pub method: Extraction,
    /// `c(1), …, c(n_max)`.
    pub coeffs: Vec<Complex64>,
    /// Per-coefficient error estimate: tail of the `a`-sum for the residue
    /// route, amplified rounding for the DFT route.
    pub noise: Vec<f64>,
    /// Set when the DFT noise at `n_max` exceeds `1e-4·max |c(n)|`.
    pub ill_conditioned: bool,
}

#[derive(Serialize, Deserialize)]
struct CoeffDocument {
    params: LocalPolyParams,
    y: Option<f64>,
    samples: Option<usize>,
    a_bound: u64,
    n_max: usize,
    coeffs: Vec<(usize, f64, f64)>,
    noise: Vec<f64>,
    ill_conditioned: bool,
}

impl FourierCoeffs {
    pub fn n_max(&self) -> usize {
        self.coeffs.len()
    }

    /// `c(n)` for `1 ≤ n ≤ n_max`, zero outside.
    pub fn get(&self, n: usize) -> Complex64 {
        if n == 0 || n > self.coeffs.len() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[n - 1]
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        let (y, samples) = match self.method {
            Extraction::Orbit => (None, None),
            Extraction::Dft { y, samples } => (Some(y), Some(samples)),
        };
        let doc = CoeffDocument {
            params: self.params,
            y,
            samples,
            a_bound: self.a_bound,
            n_max: self.n_max(),
            coeffs: self.coeffs.iter().enumerate().map(|(i, c)| (i + 1, c.re, c.im)).collect(),
            noise: self.noise.clone(),
            ill_conditioned: self.ill_conditioned,
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CoeffDocument = serde_json::from_str(s)?;
        if doc.coeffs.len() != doc.n_max || doc.noise.len() != doc.n_max {
            return Err(Error::data("coefficient table length disagrees with n_max"));
        }
        if doc.coeffs.iter().enumerate().any(|(i, c)| c.0 != i + 1) {
            return Err(Error::data("coefficients must be listed for n = 1, 2, … in order"));
        }
        let method = match (doc.y, doc.samples) {
            (Some(y), Some(samples)) => Extraction::Dft { y, samples },
            (None, None) => Extraction::Orbit,
            _ => return Err(Error::data("y and samples must be given together")),
        };
        Ok(FourierCoeffs {
            params: doc.params,
            a_bound: doc.a_bound,
            method,
            coeffs: doc.coeffs.iter().map(|c| Complex64::new(c.1, c.2)).collect(),
            noise: doc.noise,
            ill_conditioned: doc.ill_conditioned,
        })
    }
}

/// `c(n)` for `n ≤ n_max` by residues over all classes with `a ≤ a_bound`.
pub fn fourier_coefficients(params: &LocalPolyParams, n_max: usize, policy: &TruncationPolicy) -> Result<FourierCoeffs> {
    policy.check(params)?;
    let table = OrbitTable::cached(params, policy.a_bound)?;
    let k = params.k;
    let sqrt_delta = (params.delta() as f64).sqrt();
    let weight = 1.0 + table.reflection_sign();
    let (coeffs, noise) = sum_over_orbits(&table, n_max, policy.tail, |o, out| {
        let a = o.a as f64;
        let beta = sqrt_delta / (2.0 * a);
        let scale = weight * o.chi as f64 * a.powi(-(k as i32));
        let step = e(o.b as f64 / (2.0 * a));
        let mut phase = step;
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = orbit_integral(k, i as u64 + 1, beta) * phase * scale;
            phase *= step;
        }
    });
    Ok(FourierCoeffs {
        params: *params,
        a_bound: policy.a_bound,
        method: Extraction::Orbit,
        coeffs,
        noise,
        ill_conditioned: false,
    })
}

/// Value of a truncated sum together with its empirical tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub value: Complex64,
    pub tail: f64,
}

/// `Σ_{|a| ≤ a_bound} χ_{D₀}(Q) Q(z,1)^{-k}` by direct summation over each
/// class's `b`-window.
pub fn eval_f(params: &LocalPolyParams, z: Complex64, policy: &TruncationPolicy) -> Result<Evaluated> {
    if z.im <= 0.0 {
        return Err(Error::domain(format!("Im z = {} must be positive", z.im)));
    }
    policy.check(params)?;
    let table = OrbitTable::cached(params, policy.a_bound)?;
    Ok(eval_f_table(&table, z, policy))
}

pub(crate) fn eval_f_table(table: &OrbitTable, z: Complex64, policy: &TruncationPolicy) -> Evaluated {
    let params = &table.params;
    let k = params.k as i32;
    let quarter = params.delta() as f64 / 4.0;
    let weight = 1.0 + table.reflection_sign();
    let window = policy.window as f64;
    let (v, tail) = sum_over_orbits(table, 1, policy.tail, |o, out| {
        let a = o.a as f64;
        let u0 = z.re + o.b as f64 / (2.0 * a);
        let (lo, hi) = ((-u0 - window).ceil() as i64, (-u0 + window).floor() as i64);
        let mut s = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            let w = Complex64::new(u0 + m as f64, z.im);
            s += (w * w * a - quarter / a).powi(-k);
        }
        // Midpoint rule for Σ (t + iy)^{-2k} beyond the window.
        let right = Complex64::new(u0 + hi as f64 + 0.5, z.im).powi(1 - 2 * k);
        let left = Complex64::new(u0 + lo as f64 - 0.5, z.im).powi(1 - 2 * k);
        s += (right - left) * (a.powi(-k) / (2 * k - 1) as f64);
        out[0] = s * (weight * o.chi as f64);
    });
    Evaluated { value: v[0], tail: tail[0] }
}

/// Recovers `c(n)e^{-2πny}` from `M = samples` values of `f` on `Im z = y`
/// by discrete orthogonality and divides out the exponential.
pub fn extract_coeffs(
    params: &LocalPolyParams,
    n_max: usize,
    y: f64,
    samples: usize,
    policy: &TruncationPolicy,
) -> Result<FourierCoeffs> {
    if y <= 0.0 {
        return Err(Error::domain(format!("y = {y} must be positive")));
    }
    if samples < 4 * n_max {
        return Err(Error::validation(format!("{samples} samples is fewer than 4·n_max = {}", 4 * n_max)));
    }
    policy.check(params)?;
    let table = OrbitTable::cached(params, policy.a_bound)?;
    let mut values =
        exec::map_range(samples, |j| eval_f_table(&table, Complex64::new(j as f64 / samples as f64, y), policy).value);
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    FftPlanner::new().plan_fft_forward(samples).process(&mut values);
    let mut coeffs = Vec::with_capacity(n_max);
    let mut noise = Vec::with_capacity(n_max);
    for (n, v) in values.iter().enumerate().take(n_max + 1).skip(1) {
        let growth = (TAU * n as f64 * y).exp();
        coeffs.push(v / samples as f64 * growth);
        noise.push(64.0 * f64::EPSILON * peak * growth);
    }
    let largest = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let ill_conditioned = noise.last().is_some_and(|&e| e > 1e-4 * largest);
    Ok(FourierCoeffs {
        params: *params,
        a_bound: policy.a_bound,
        method: Extraction::Dft { y, samples },
        coeffs,
        noise,
        ill_conditioned,
    })
}

/// `Σ_{n ≤ n_max} c(n) e(nz)`.
pub fn eval_from_coeffs(coeffs: &FourierCoeffs, z: Complex64) -> Complex64 {
    let q = e(z.re) * (-TAU * z.im).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    for c in &coeffs.coeffs {
        qn *= q;
        s += c * qn;
    }
    s
}

/// `Δ^{k-1/2}(2k-2)!/(4π)^{2k-1}`, the weight of the holomorphic Eichler
/// integral in the splitting of `𝓕`.
pub fn holomorphic_weight(params: &LocalPolyParams) -> f64 {
    let k = params.k as i32;
    let mut fact = 1.0;
    for j in 1..=(2 * k - 2) {
        fact *= j as f64;
    }
    (params.delta() as f64).powf(k as f64 - 0.5) * fact / (4.0 * PI).powi(2 * k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_match_weight_four_closed_form() {
        for (n, beta) in [(1u64, 0.3), (2, 1.7), (5, 0.01), (3, 4.0)] {
            let th = TAU * n as f64 * beta;
            let closed = TAU * ((th.sin()) / (2.0 * beta.powi(3)) - PI * n as f64 * th.cos() / (beta * beta));
            let got = orbit_integral(2, n, beta);
            assert!((got.re - closed).abs() < 1e-10 * closed.abs().max(1.0), "n={n} β={beta}: {got} vs {closed}");
            assert!(got.im.abs() < 1e-10 * closed.abs().max(1.0));
        }
    }

    #[test]
    fn series_and_residues_agree_near_the_switch() {
        for k in [2u32, 3, 4] {
            for (n, theta) in [(1u64, 0.8), (1, 1.5), (3, 2.5)] {
                let beta = theta / (TAU * n as f64);
                let a = orbit_integral_series(k, n, beta);
                let b = orbit_integral_residues(k, n, beta);
                assert!((a - b).norm() < 1e-9 * b.norm(), "k={k} n={n} θ={theta}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn residues_small_beta_limit() {
        // β → 0: ∫ u^{-2k} e(-nu) du = (-2πi n)^{2k-1}(-2πi)/(2k-1)!.
        for k in [2u32, 3] {
            let n = 2u64;
            let mut fact = 1.0;
            for j in 1..(2 * k) {
                fact *= j as f64;
            }
            let limit = Complex64::new(0.0, -TAU * n as f64).powi(2 * k as i32 - 1) * Complex64::new(0.0, -TAU) / fact;
            let got = orbit_integral(k, n, 1e-3);
            assert!((got - limit).norm() < 1e-3 * limit.norm(), "k={k}: {got} vs {limit}");
        }
    }

    #[test]
    fn json_round_trip() {
        let p = LocalPolyParams::new(2, 7, 57, 29).unwrap();
        let c = fourier_coefficients(&p, 5, &TruncationPolicy::coefficients(7)).unwrap();
        let back = FourierCoeffs::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back.coeffs, c.coeffs);
        assert_eq!(back.noise, c.noise);
        assert_eq!(back.method, Extraction::Orbit);
        assert!(FourierCoeffs::from_json("{\"bad\": 1}").is_err());
    }
}
