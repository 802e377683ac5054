//! Rational-point splitting `𝒫script(x) = γ + δ·Φ(x)`, with `δ` estimated from
//! the exact values at `1/2` and `1/3`. With a Hecke polynomial the exact side
//! is the transported `𝒫script` and `γ` is scaled by the polynomial's action
//! on constants; `Φ` is then the series of the isolated newform.

use num_rational::BigRational;
use serde::Serialize;

use super::eichler::phi;
use crate::class_numbers::c_infty_closed;
use crate::error::{Error, Result};
use crate::hecke::{HeckeEvaluator, HeckePolynomial};
use crate::local_poly::{LocalPolyParams, LocalPolynomial};
use crate::nt::{rat, rat_to_f64};
use crate::qforms::RationalPoint;

/// `|Φ(1/2) - Φ(1/3)|` below this is treated as degenerate.
pub const PHI_DEGENERATE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct DeltaEstimate {
    pub script_half: f64,
    pub script_third: f64,
    pub phi_half: f64,
    pub phi_third: f64,
    pub delta_hat: f64,
}

fn transported_values(params: &LocalPolyParams, poly: &HeckePolynomial, xs: &[BigRational]) -> Result<Vec<BigRational>> {
    poly.validate(params.n)?;
    let lp = LocalPolynomial::new(params)?;
    let pts = xs.iter().map(RationalPoint::from_big).collect::<Result<Vec<_>>>()?;
    HeckeEvaluator::new(&lp, poly, params.k).eval_many(&pts)
}

/// `δ̂ = (𝒫(1/2) - 𝒫(1/3)) / (Φ(1/2) - Φ(1/3))`, where `𝒫` is the script
/// polynomial transported by `poly` and `Φ` uses `phi_coeffs`.
pub fn estimate_delta(params: &LocalPolyParams, poly: &HeckePolynomial, phi_coeffs: &[f64]) -> Result<DeltaEstimate> {
    let v = transported_values(params, poly, &[rat(1, 2), rat(1, 3)])?;
    delta_from_values(params.k, rat_to_f64(&v[0]), rat_to_f64(&v[1]), phi_coeffs)
}

fn delta_from_values(k: u32, script_half: f64, script_third: f64, phi_coeffs: &[f64]) -> Result<DeltaEstimate> {
    let phi_half = phi(phi_coeffs, k, 0.5);
    let phi_third = phi(phi_coeffs, k, 1.0 / 3.0);
    if (phi_half - phi_third).abs() < PHI_DEGENERATE {
        return Err(Error::Numerical("Φ degenerate, f likely vanishes".into()));
    }
    Ok(DeltaEstimate {
        script_half,
        script_third,
        phi_half,
        phi_third,
        delta_hat: (script_half - script_third) / (phi_half - phi_third),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingCheck {
    /// `γ` from the closed-form constant term.
    pub gamma: f64,
    /// `γ` times the action of the Hecke polynomial on constants.
    pub gamma_prime: f64,
    pub delta: DeltaEstimate,
    pub phi_terms: usize,
    /// `(x, 𝒫(x), Φ(x), γ' + δ̂Φ(x) - 𝒫(x))` at each requested point.
    pub points: Vec<(f64, f64, f64, f64)>,
}

impl SplittingCheck {
    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.3.abs()).fold(0.0, f64::max)
    }
}

/// Residuals `γ' + δ̂Φ(x) - 𝒫(x)` at each of `xs`, with `Φ` truncated to the
/// first `phi_terms` coefficients.
pub fn splitting_check(
    params: &LocalPolyParams,
    poly: &HeckePolynomial,
    phi_coeffs: &[f64],
    phi_terms: usize,
    xs: &[BigRational],
) -> Result<SplittingCheck> {
    if phi_coeffs.len() < phi_terms {
        return Err(Error::data(format!("{} coefficients available, {phi_terms} requested", phi_coeffs.len())));
    }
    let coeffs = &phi_coeffs[..phi_terms];
    let mut all = vec![rat(1, 2), rat(1, 3)];
    all.extend(xs.iter().cloned());
    let values = transported_values(params, poly, &all)?;
    let values: Vec<f64> = values.iter().map(rat_to_f64).collect();
    let delta = delta_from_values(params.k, values[0], values[1], coeffs)?;
    let gamma = c_infty_closed(params)?.gamma;
    let gamma_prime = gamma * rat_to_f64(&poly.constant_multiplier(params.k));
    let points = xs
        .iter()
        .zip(&values[2..])
        .map(|(x, &p)| {
            let xf = rat_to_f64(x);
            let ph = phi(coeffs, params.k, xf);
            (xf, p, ph, gamma_prime + delta.delta_hat * ph - p)
        })
        .collect();
    Ok(SplittingCheck { gamma, gamma_prime, delta, phi_terms, points })
}
