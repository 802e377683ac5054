//! Incomplete beta and gamma functions on top of `statrs`.

use num_complex::Complex64;
use statrs::function::{beta, gamma};

/// `β(w; r, s) = ∫₀^w t^{r-1}(1-t)^{s-1} dt` for `0 ≤ w ≤ 1`.
pub fn incomplete_beta(w: f64, r: f64, s: f64) -> f64 {
    beta::beta(r, s) * beta::beta_reg(r, s, w.clamp(0.0, 1.0))
}

/// Upper incomplete gamma `Γ(s, x)` for `s > 0`, `x ≥ 0`.
pub fn upper_gamma(s: f64, x: f64) -> f64 {
    gamma::gamma(s) * gamma::gamma_ur(s, x)
}

/// `e(t) = exp(2πi t)`.
pub fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn beta_endpoints_and_closed_form() {
        // β(1; 3/2, 1/2) = B(3/2, 1/2) = π/2.
        assert!((incomplete_beta(1.0, 1.5, 0.5) - PI / 2.0).abs() < 1e-13);
        // β(w; 3/2, 1/2) = asin(√w) - √(w(1-w)), or its power series
        // Σ_j (1/2)_j/j! · w^{j+3/2}/(j+3/2) where the closed form cancels.
        for w in [1e-8f64, 0.01, 0.3, 0.9, 0.999999] {
            let exact = if w < 0.05 {
                let (mut coef, mut sum) = (1.0, 0.0);
                for j in 0..30 {
                    sum += coef * w.powf(j as f64 + 1.5) / (j as f64 + 1.5);
                    coef *= (j as f64 + 0.5) / (j as f64 + 1.0);
                }
                sum
            } else {
                w.sqrt().asin() - (w * (1.0 - w)).sqrt()
            };
            assert!((incomplete_beta(w, 1.5, 0.5) - exact).abs() < 1e-13 * exact.max(1e-12), "w = {w}");
        }
    }

    #[test]
    fn gamma_integer_order() {
        // Γ(3, x) = 2 e^{-x}(1 + x + x²/2).
        for x in [0.1f64, 1.0, 6.3, 40.0] {
            let exact = 2.0 * (-x).exp() * (1.0 + x + x * x / 2.0);
            assert!((upper_gamma(3.0, x) - exact).abs() < 1e-12 * exact, "x = {x}");
        }
    }
}
