//! The locally harmonic form
//! `𝓕(z) = ½ Σ χ_{D₀}(Q) sgn(Q_z) Q(z,1)^{k-1} β(Δy²/|Q(z,1)|²; k-1/2, 1/2)`
//! and its local polynomial `P(z)` off the geodesics.
//!
//! Per translation class the `b`-sum of `𝓕` expands as a constant, the jump
//! polynomial of the geodesics above `z`, and holomorphic and
//! non-holomorphic Fourier tails. Summed over classes this gives
//!
//! `𝓕 = 2(-1)^{k-1} P - Δ^{k-1/2}(2k-2)!/(4π)^{2k-1} 𝓔_f - Δ^{k-1/2} 2^{1-2k} f*`
//!
//! with `𝓔_f`, `f*` normalized as in `eichler`. The identity holds class by
//! class, so it survives truncation at `a_bound` when `c_∞`, `c(n)` and `𝓕`
//! are all truncated there.

use num_complex::Complex64;

use super::coeffs::{fourier_coefficients, holomorphic_weight, sum_over_orbits, Evaluated, TruncationPolicy};
use super::eichler::{holomorphic_eichler, nonholomorphic_eichler};
use super::orbits::OrbitTable;
use super::special::incomplete_beta;
use crate::class_numbers::c_infty_closed;
use crate::error::{Error, Result};
use crate::local_poly::{c_infty_series, LocalPolyParams};
use crate::qforms::{GenusCharacter, QuadForm};

/// Points with `Δy²/|Q(z,1)|² > 1 - GEODESIC_EPS` for some form are rejected.
pub const GEODESIC_EPS: f64 = 1e-9;

/// `𝓕(z)` truncated to `|a| ≤ a_bound`, by direct summation over each
/// class's `b`-window plus the leading-order integral beyond it.
pub fn eval_locally_harmonic_f(params: &LocalPolyParams, z: Complex64, policy: &TruncationPolicy) -> Result<Evaluated> {
    if z.im <= 0.0 {
        return Err(Error::domain(format!("Im z = {} must be positive", z.im)));
    }
    policy.check(params)?;
    let table = OrbitTable::cached(params, policy.a_bound)?;
    let k = params.k as i32;
    let delta = params.delta() as f64;
    let r = k as f64 - 0.5;
    let quarter = delta / 4.0;
    let weight = 0.5 * (1.0 + table.reflection_sign());
    let window = policy.window as f64;
    let (x, y) = (z.re, z.im);
    let near = std::sync::Mutex::new(None);
    let (v, tail) = sum_over_orbits(&table, 1, policy.tail, |o, out| {
        let a = o.a as f64;
        let u0 = x + o.b as f64 / (2.0 * a);
        let (lo, hi) = ((-u0 - window).ceil() as i64, (-u0 + window).floor() as i64);
        let mut s = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            let t = u0 + m as f64;
            let w = Complex64::new(t, y);
            let q = w * w * a - quarter / a;
            let qz = (a * (t * t + y * y) - quarter / a) / y;
            // |Q(z,1)|² = y²(Q_z² + Δ), so the beta argument is Δ/(Q_z² + Δ).
            let arg = delta / (qz * qz + delta);
            if arg > 1.0 - GEODESIC_EPS {
                let b = o.b as i128 + 2 * o.a as i128 * m as i128;
                let form = QuadForm::new(o.a as i128, b, (b * b - params.delta()) / (4 * o.a as i128));
                *near.lock().unwrap() = Some(form);
                continue;
            }
            s += q.powi(k - 1) * (qz.signum() * incomplete_beta(arg, r, 0.5));
        }
        // Beyond the window the summand is a^{-k}(Δy²)^{k-1/2}/(k-1/2) · t^{-2k}(1 + O(t^{-2})).
        let lead = a.powi(-k) * (delta * y * y).powf(r) / r / (2 * k - 1) as f64;
        let right = (u0 + hi as f64 + 0.5).powi(1 - 2 * k);
        let left = (-(u0 + lo as f64 - 0.5)).powi(1 - 2 * k);
        s += lead * (right + left);
        out[0] = s * (weight * o.chi as f64);
    });
    if let Some(form) = near.into_inner().unwrap() {
        return Err(Error::NearGeodesic(form));
    }
    Ok(Evaluated { value: v[0], tail: tail[0] })
}

/// `P(z) = c_∞ + (-1)^{k-1} C(2k-2,k-1) π 2^{2-2k} Σ_{a<0<Q_z} χ_{D₀}(Q) Q(z,1)^{k-1}`.
/// Only forms whose geodesic passes above `z` enter, so the sum is finite.
pub fn local_polynomial_at(params: &LocalPolyParams, z: Complex64, c_infty: f64) -> Result<Complex64> {
    if z.im <= 0.0 {
        return Err(Error::domain(format!("Im z = {} must be positive", z.im)));
    }
    let chi = GenusCharacter::new(params.d0, params.n)?;
    let delta = params.delta();
    let sqrt_delta = (delta as f64).sqrt();
    let (x, y) = (z.re, z.im);
    let k = params.k as i32;
    let mut sum = Complex64::new(0.0, 0.0);
    let n = params.n as i128;
    let mut a = -n;
    // The geodesic of [a, b, c] has radius √Δ/(2|a|).
    while sqrt_delta / (2.0 * (-a) as f64) > y {
        let radius = sqrt_delta / (2.0 * (-a) as f64);
        let m = 2.0 * (-a) as f64;
        // The centre is b/(2|a|); keep |x - b/(2|a|)| < radius.
        let (lo, hi) = ((m * (x - radius)).floor() as i128, (m * (x + radius)).ceil() as i128);
        for b in lo..=hi {
            let num = b * b - delta;
            if num.rem_euclid(4 * a) != 0 {
                continue;
            }
            let form = QuadForm::new(a, b, num / (4 * a));
            let qz = (a as f64 * (x * x + y * y) + b as f64 * x + form.c as f64) / y;
            if qz * qz < GEODESIC_EPS * delta as f64 {
                return Err(Error::NearGeodesic(form));
            }
            if qz <= 0.0 {
                continue;
            }
            let c = chi.eval(&form)?;
            if c == 0 {
                continue;
            }
            let q = z * z * a as f64 + z * b as f64 + form.c as f64;
            sum += q.powi(k - 1) * c as f64;
        }
        a -= n;
    }
    Ok(sum * params.prefactor() + c_infty)
}

/// Components of the three-part splitting at one point.
#[derive(Clone, Copy, Debug)]
pub struct ThreePartSplitting {
    pub z: Complex64,
    pub a_bound: u64,
    /// Direct sum for `𝓕`.
    pub direct: Complex64,
    pub local: Complex64,
    pub holomorphic: Complex64,
    pub nonholomorphic: Complex64,
    /// `2(-1)^{k-1}P - w_h 𝓔_f - Δ^{k-1/2} 2^{1-2k} f*`.
    pub rhs: Complex64,
    pub residual: f64,
}

/// Weights `(w_P, w_E, w_*)` with `𝓕 = w_P P + w_E 𝓔_f + w_* f*`.
pub fn splitting_weights(params: &LocalPolyParams) -> (f64, f64, f64) {
    let k = params.k as i32;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let delta = params.delta() as f64;
    (2.0 * sign, -holomorphic_weight(params), -delta.powf(k as f64 - 0.5) * 2f64.powi(1 - 2 * k))
}

/// Evaluates both sides of the splitting with every piece truncated at
/// `policy.a_bound`; `P` needs every geodesic above `z`, so `a_bound` must
/// reach `√Δ/(2y)`.
pub fn three_part_splitting(params: &LocalPolyParams, z: Complex64, policy: &TruncationPolicy) -> Result<ThreePartSplitting> {
    let reach = (params.delta() as f64).sqrt() / (2.0 * z.im);
    if (policy.a_bound as f64) < reach {
        return Err(Error::validation(format!("a_bound {} does not reach √Δ/(2y) = {reach:.1}", policy.a_bound)));
    }
    let direct = eval_locally_harmonic_f(params, z, policy)?.value;
    let c_inf = c_infty_series(params, policy.a_bound)?.value;
    let local = local_polynomial_at(params, z, c_inf)?;
    // e^{-2πny} below 1e-18 relative.
    let n_max = (41.0 / (std::f64::consts::TAU * z.im)).ceil() as usize;
    let coeffs = fourier_coefficients(params, n_max, policy)?;
    let holomorphic = holomorphic_eichler(&coeffs.coeffs, params.k, z)?;
    let nonholomorphic = nonholomorphic_eichler(&coeffs.coeffs, params.k, z)?;
    let (wp, we, ws) = splitting_weights(params);
    let rhs = local * wp + holomorphic * we + nonholomorphic * ws;
    Ok(ThreePartSplitting {
        z,
        a_bound: policy.a_bound,
        direct,
        local,
        holomorphic,
        nonholomorphic,
        rhs,
        residual: (direct - rhs).norm(),
    })
}

/// Contribution of all classes with `|a| > policy.a_bound` to `𝓕(z)`,
/// assembled from the closed-form `c_∞` and coefficients truncated at
/// `fine.a_bound`. Valid when every geodesic beyond `policy.a_bound` lies
/// below `z`.
pub fn harmonic_tail(
    params: &LocalPolyParams,
    z: Complex64,
    policy: &TruncationPolicy,
    fine: &TruncationPolicy,
) -> Result<Complex64> {
    let reach = (params.delta() as f64).sqrt() / (2.0 * z.im);
    if (policy.a_bound as f64) < reach {
        return Err(Error::validation(format!("a_bound {} does not reach √Δ/(2y) = {reach:.1}", policy.a_bound)));
    }
    if fine.a_bound <= policy.a_bound {
        return Err(Error::validation("the fine truncation must exceed the pointwise one"));
    }
    let n_max = (41.0 / (std::f64::consts::TAU * z.im)).ceil() as usize;
    let coarse = fourier_coefficients(params, n_max, policy)?;
    let full = fourier_coefficients(params, n_max, fine)?;
    let diff: Vec<Complex64> = full.coeffs.iter().zip(&coarse.coeffs).map(|(f, c)| f - c).collect();
    let c_gap = c_infty_closed(params)?.value - c_infty_series(params, policy.a_bound)?.value;
    let (wp, we, ws) = splitting_weights(params);
    Ok(Complex64::new(wp * c_gap, 0.0)
        + holomorphic_eichler(&diff, params.k, z)? * we
        + nonholomorphic_eichler(&diff, params.k, z)? * ws)
}

/// `𝓕(z)` with the classes beyond `policy.a_bound` restored by [`harmonic_tail`].
pub fn eval_locally_harmonic_f_completed(
    params: &LocalPolyParams,
    z: Complex64,
    policy: &TruncationPolicy,
    fine: &TruncationPolicy,
) -> Result<Complex64> {
    Ok(eval_locally_harmonic_f(params, z, policy)?.value + harmonic_tail(params, z, policy, fine)?)
}
