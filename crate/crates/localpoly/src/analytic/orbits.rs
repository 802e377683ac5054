//! Translation classes of forms `[a, b, c]` with `a > 0`, `N | a`, `b mod 2a`.
//! The class of `-Q` contributes `ε = sgn(D₀)(-1)^k` times the class of `Q`
//! to every sum used here, so only `a > 0` is stored.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exec;
use crate::local_poly::LocalPolyParams;
use crate::nt::{sqrts_mod, SpfSieve};
use crate::qforms::{GenusCharacter, QuadForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub a: u64,
    /// Representative `0 ≤ b < 2a`.
    pub b: u64,
    pub chi: i8,
}

impl Orbit {
    pub fn form(&self, delta: i128) -> QuadForm {
        let (a, b) = (self.a as i128, self.b as i128);
        QuadForm::new(a, b, (b * b - delta) / (4 * a))
    }
}

#[derive(Debug)]
pub struct OrbitTable {
    pub params: LocalPolyParams,
    pub a_bound: u64,
    /// Sorted by `a`, then `b`; classes with `χ = 0` are dropped.
    pub orbits: Vec<Orbit>,
}

impl OrbitTable {
    pub fn build(params: &LocalPolyParams, a_bound: u64) -> Result<Self> {
        if a_bound < params.n {
            return Err(Error::validation(format!("a_bound {a_bound} is below the level {}", params.n)));
        }
        let chi = GenusCharacter::new(params.d0, params.n)?;
        let delta = params.delta();
        let n = params.n;
        let sieve = SpfSieve::new(4 * a_bound as usize + 1);
        let per_a = exec::map_range((a_bound / n) as usize, |j| {
            let a = (j as u64 + 1) * n;
            let mut out: Vec<Orbit> = sqrts_mod(delta, &sieve.factorize(4 * a))
                .into_iter()
                .filter(|&b| b < 2 * a)
                .filter_map(|b| {
                    let orbit = Orbit { a, b, chi: 0 };
                    let c = chi.eval_unchecked(&orbit.form(delta));
                    (c != 0).then_some(Orbit { chi: c, ..orbit })
                })
                .collect();
            out.sort_by_key(|o| o.b);
            out
        });
        Ok(OrbitTable { params: *params, a_bound, orbits: per_a.into_iter().flatten().collect() })
    }

    /// Shared, lazily built table for `(params, a_bound)`.
    pub fn cached(params: &LocalPolyParams, a_bound: u64) -> Result<Arc<Self>> {
        type Key = (LocalPolyParams, u64);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<OrbitTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (*params, a_bound);
        if let Some(t) = cache.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let table = Arc::new(Self::build(params, a_bound)?);
        cache.lock().unwrap().insert(key, table.clone());
        Ok(table)
    }

    /// Weight of the `-Q` class relative to the `Q` class.
    pub fn reflection_sign(&self) -> f64 {
        let s = if self.params.d0 < 0 { -1.0 } else { 1.0 };
        if self.params.k.is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    /// Splits the orbit list into `chunks` runs of consecutive `a`, for
    /// blocked summation with partial sums at chunk boundaries.
    pub fn blocks(&self, chunks: usize) -> Vec<&[Orbit]> {
        if self.orbits.is_empty() {
            return Vec::new();
        }
        let size = self.orbits.len().div_ceil(chunks.max(1));
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.orbits.len() {
            let mut end = (start + size).min(self.orbits.len());
            while end < self.orbits.len() && self.orbits[end].a == self.orbits[end - 1].a {
                end += 1;
            }
            out.push(&self.orbits[start..end]);
            start = end;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_cover_residues_and_carry_character() {
        let p = LocalPolyParams::new(2, 7, 57, 29).unwrap();
        let t = OrbitTable::build(&p, 700).unwrap();
        let delta = p.delta();
        let chi = GenusCharacter::new(29, 7).unwrap();
        for a in (7..=700).step_by(7) {
            let mut expected: Vec<u64> = (0..2 * a as i128)
                .filter(|b| (b * b - delta).rem_euclid(4 * a as i128) == 0)
                .filter(|&b| chi.eval(&QuadForm::new(a as i128, b, (b * b - delta) / (4 * a as i128))).unwrap() != 0)
                .map(|b| b as u64)
                .collect();
            expected.sort();
            let got: Vec<u64> = t.orbits.iter().filter(|o| o.a == a).map(|o| o.b).collect();
            assert_eq!(got, expected, "a = {a}");
        }
        assert_eq!(t.reflection_sign(), 1.0);
        let blocks = t.blocks(7);
        assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), t.orbits.len());
        for w in blocks.windows(2) {
            assert!(w[0].last().unwrap().a < w[1][0].a);
        }
    }
}
