use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Q(x, y) = a x² + b x y + c y²`; ordered lexicographically by `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl QuadForm {
    pub const fn new(a: i128, b: i128, c: i128) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `Q(x, y)` at integers, with overflow detection.
    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        let t1 = self.a.checked_mul(x).and_then(|v| v.checked_mul(x));
        let t2 = self.b.checked_mul(x).and_then(|v| v.checked_mul(y));
        let t3 = self.c.checked_mul(y).and_then(|v| v.checked_mul(y));
        match (t1, t2, t3) {
            (Some(t1), Some(t2), Some(t3)) => t1
                .checked_add(t2)
                .and_then(|v| v.checked_add(t3))
                .ok_or(Error::Overflow("form evaluation")),
            _ => Err(Error::Overflow("form evaluation")),
        }
    }

    pub fn neg(&self) -> Self {
        QuadForm::new(-self.a, -self.b, -self.c)
    }

    /// `Q ∘ M`, i.e. `Q(αx + βy, γx + δy)`; `M` must be unimodular.
    pub fn apply(&self, m: &GL2Matrix) -> Result<QuadForm> {
        if !m.is_unimodular() {
            return Err(Error::domain("matrix is not unimodular"));
        }
        Ok(self.apply_unchecked(m))
    }

    pub(crate) fn apply_unchecked(&self, m: &GL2Matrix) -> QuadForm {
        let (a, b, c) = (self.a, self.b, self.c);
        let (al, be, ga, de) = (m.alpha, m.beta, m.gamma, m.delta);
        QuadForm {
            a: a * al * al + b * al * ga + c * ga * ga,
            b: 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
            c: a * be * be + b * be * de + c * de * de,
        }
    }

    /// Action of the Fricke involution: `[a, b, c] ↦ [cN, -b, a/N]`; needs `N | a`.
    pub fn fricke(&self, n: u64) -> Result<QuadForm> {
        let n = n as i128;
        if n == 0 || self.a % n != 0 {
            return Err(Error::domain(format!("{n} does not divide a in {self}")));
        }
        Ok(QuadForm::new(self.c * n, -self.b, self.a / n))
    }

    /// `Im(z) · Q_z = a|z|² + b Re z + c`.
    pub fn geodesic_sign_numerator(&self, x: f64, y: f64) -> f64 {
        self.a as f64 * (x * x + y * y) + self.b as f64 * x + self.c as f64
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Integral 2×2 matrix `((α, β), (γ, δ))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GL2Matrix {
    pub alpha: i128,
    pub beta: i128,
    pub gamma: i128,
    pub delta: i128,
}

impl GL2Matrix {
    pub const IDENTITY: GL2Matrix = GL2Matrix::new(1, 0, 0, 1);
    /// `T = ((1, 1), (0, 1))`.
    pub const T: GL2Matrix = GL2Matrix::new(1, 1, 0, 1);
    pub const T_INV: GL2Matrix = GL2Matrix::new(1, -1, 0, 1);
    pub const S: GL2Matrix = GL2Matrix::new(0, -1, 1, 0);

    pub const fn new(alpha: i128, beta: i128, gamma: i128, delta: i128) -> Self {
        GL2Matrix { alpha, beta, gamma, delta }
    }

    pub fn det(&self) -> i128 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    pub fn mul(&self, o: &GL2Matrix) -> GL2Matrix {
        GL2Matrix::new(
            self.alpha * o.alpha + self.beta * o.gamma,
            self.alpha * o.beta + self.beta * o.delta,
            self.gamma * o.alpha + self.delta * o.gamma,
            self.gamma * o.beta + self.delta * o.delta,
        )
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<GL2Matrix> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::domain("matrix is not unimodular"));
        }
        Ok(GL2Matrix::new(d * self.delta, -d * self.beta, -d * self.gamma, d * self.alpha))
    }

    /// Membership in `Γ₀(N)`: determinant 1 and `N | γ`.
    pub fn in_gamma0(&self, n: u64) -> bool {
        self.det() == 1 && self.gamma % n as i128 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_translation() {
        let q = QuadForm::new(-7, 3, 38);
        assert_eq!(q.apply(&GL2Matrix::IDENTITY).unwrap(), q);
        assert_eq!(q.apply(&GL2Matrix::T_INV).unwrap(), QuadForm::new(-7, 14 + 3, -7 - 3 + 38));
    }

    #[test]
    fn fricke_rule() {
        let q = QuadForm::new(-14, 5, 3);
        assert_eq!(q.fricke(7).unwrap(), QuadForm::new(21, -5, -2));
        assert_eq!(q.fricke(7).unwrap().disc(), q.disc());
        assert!(q.fricke(3).is_err());
    }

    #[test]
    fn cocycle_and_discriminant() {
        let q = QuadForm::new(3, -7, -11);
        let m1 = GL2Matrix::new(2, 1, 1, 1);
        let m2 = GL2Matrix::new(1, -3, 0, 1);
        let lhs = q.apply(&m1).unwrap().apply(&m2).unwrap();
        assert_eq!(lhs, q.apply(&m1.mul(&m2)).unwrap());
        assert_eq!(lhs.disc(), q.disc());
        assert!(q.apply(&GL2Matrix::new(2, 0, 0, 1)).is_err());
        let inv = m1.inverse().unwrap();
        assert_eq!(m1.mul(&inv), GL2Matrix::IDENTITY);
    }
}
