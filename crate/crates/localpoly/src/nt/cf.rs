use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Finite simple continued fraction `[a₀; a₁, …, a_m]` with its convergents.
///
/// Canonical form: `a_i ≥ 1` for `i ≥ 1` and `a_m ≥ 2` whenever `m ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    /// Numerators `p_0, …, p_m`.
    pub p: Vec<BigInt>,
    /// Denominators `q_0, …, q_m`.
    pub q: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn new(x: &BigRational) -> Self {
        let mut quotients = Vec::new();
        let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
        loop {
            let (a, r) = n.div_mod_floor(&d);
            quotients.push(a);
            if r.is_zero() {
                break;
            }
            n = d;
            d = r;
        }
        // Euclid on a reduced fraction with positive denominator never ends in 1
        // unless m = 0, so the expansion is already canonical.
        Self::from_quotients(quotients).expect("Euclidean expansion is canonical")
    }

    /// Builds from partial quotients, rejecting non-canonical input.
    pub fn from_quotients(quotients: Vec<BigInt>) -> Option<Self> {
        let m = quotients.len().checked_sub(1)?;
        if quotients[1..].iter().any(|a| *a < BigInt::one()) {
            return None;
        }
        if m >= 1 && quotients[m] < BigInt::from(2) {
            return None;
        }
        let (mut p, mut q) = (Vec::with_capacity(m + 1), Vec::with_capacity(m + 1));
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
        for a in &quotients {
            let pn = a * &p1 + &p2;
            let qn = a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, pn.clone());
            q2 = std::mem::replace(&mut q1, qn.clone());
            p.push(pn);
            q.push(qn);
        }
        Some(ContinuedFraction { quotients, p, q })
    }

    /// Index `m` of the last partial quotient.
    pub fn len(&self) -> usize {
        self.quotients.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(self.p[self.len()].clone(), self.q[self.len()].clone())
    }

    /// Convergent `(p_i, q_i)` with the convention `(p_{-1}, q_{-1}) = (1, 0)`.
    pub fn convergent(&self, i: isize) -> (BigInt, BigInt) {
        if i < 0 {
            (BigInt::one(), BigInt::zero())
        } else {
            (self.p[i as usize].clone(), self.q[i as usize].clone())
        }
    }

    /// `p_i q_{i-1} - p_{i-1} q_i` for `i ≥ 0`; always `(-1)^{i-1}`.
    pub fn determinant(&self, i: usize) -> BigInt {
        let (pi, qi) = self.convergent(i as isize);
        let (pj, qj) = self.convergent(i as isize - 1);
        pi * qj - pj * qi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn basic_expansions() {
        assert_eq!(ContinuedFraction::new(&rat(1, 2)).quotients, ints(&[0, 2]));
        assert_eq!(ContinuedFraction::new(&rat(27, 68)).quotients, ints(&[0, 2, 1, 1, 13]));
        assert_eq!(ContinuedFraction::new(&rat(-7, 3)).quotients, ints(&[-3, 1, 2]));
        assert_eq!(ContinuedFraction::new(&rat(5, 1)).quotients, ints(&[5]));
        let cf = ContinuedFraction::new(&rat(27, 68));
        assert_eq!(cf.value(), rat(27, 68));
    }

    #[test]
    fn shift_law() {
        let a = ContinuedFraction::new(&rat(27, 68));
        let b = ContinuedFraction::new(&(rat(27, 68) + rat(1, 1)));
        assert_eq!(a.quotients[1..], b.quotients[1..]);
        assert_eq!(&a.quotients[0] + 1, b.quotients[0]);
    }

    #[test]
    fn non_canonical_rejected() {
        assert!(ContinuedFraction::from_quotients(ints(&[0, 1, 1])).is_none());
        assert!(ContinuedFraction::from_quotients(ints(&[0, 0, 2])).is_none());
        assert!(ContinuedFraction::from_quotients(ints(&[1])).is_some());
    }

    #[test]
    fn determinant_sign() {
        let cf = ContinuedFraction::new(&rat(1234567, 7654321));
        for i in 0..=cf.len() {
            let expect = if i % 2 == 1 { 1 } else { -1 };
            assert_eq!(cf.determinant(i), BigInt::from(expect));
        }
    }
}
