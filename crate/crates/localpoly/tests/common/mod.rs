//! Random generators shared by the acceptance and property suites.
#![allow(dead_code)]

use localpoly::qforms::{GL2Matrix, GenusCharacter, QuadForm};
use rand::rngs::StdRng;
use rand::Rng;

/// `[a, b, c]` with `N | a`, `a ≠ 0 ≠ c` and small entries.
pub fn random_form(rng: &mut StdRng, n: i128) -> QuadForm {
    loop {
        let q = QuadForm::new(n * rng.gen_range(-40..=40), rng.gen_range(-60..=60), rng.gen_range(-60..=60));
        if q.a != 0 && q.c != 0 {
            return q;
        }
    }
}

/// A random form on which `chi` is defined.
pub fn random_admissible(rng: &mut StdRng, chi: &GenusCharacter) -> QuadForm {
    loop {
        let q = random_form(rng, chi.level() as i128);
        if chi.in_domain(&q) {
            return q;
        }
    }
}

/// A word of length four in `T^t` and its lower-triangular conjugate, so in `Γ₀(N)`.
pub fn random_gamma0(rng: &mut StdRng, n: i128) -> GL2Matrix {
    let mut m = GL2Matrix::IDENTITY;
    for _ in 0..4 {
        let t = rng.gen_range(-3..=3);
        let g = if rng.gen_bool(0.5) { GL2Matrix::new(1, t, 0, 1) } else { GL2Matrix::new(1, 0, n * t, 1) };
        m = m.mul(&g);
    }
    m
}

/// A positive non-square discriminant up to `max`.
pub fn random_discriminant(rng: &mut StdRng, max: i128) -> i128 {
    loop {
        let d: i128 = rng.gen_range(5..=max);
        let r = (d as f64).sqrt() as i128;
        if matches!(d % 4, 0 | 1) && (r - 1..=r + 1).all(|s| s * s != d) {
            return d;
        }
    }
}
