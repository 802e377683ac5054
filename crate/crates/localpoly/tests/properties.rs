mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use localpoly::hecke::{apply_polynomial, HeckePolynomial};
use localpoly::local_poly::{simple_form_polynomial, LocalPolynomial};
use localpoly::nt::{gcd_i128, kronecker_i128, rat, rat_pow, ContinuedFraction};
use localpoly::qforms::{enumerate_straddling_fast, enumerate_straddling_oracle, GL2Matrix, GenusCharacter, QuadForm, StraddlingQuery};
use localpoly::{BigInt, BigRational, LocalPolyParams};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn level7(d: i64) -> &'static LocalPolynomial {
    static CACHE: OnceLock<Vec<(i64, LocalPolynomial)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [37, 44, 57, 92]
            .into_iter()
            .map(|d| (d, LocalPolynomial::new(&LocalPolyParams::new(2, 7, d, 29).unwrap()).unwrap()))
            .collect()
    });
    &all.iter().find(|(e, _)| *e == d).unwrap().1
}

fn table_d() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![37i64, 44, 57, 92])
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn discriminant() -> impl Strategy<Value = i128> {
    (5i128..=5000).prop_filter("non-square discriminant", |&d| {
        let r = (d as f64).sqrt() as i128;
        matches!(d % 4, 0 | 1) && (r - 1..=r + 1).all(|s| s * s != d)
    })
}

fn unimodular() -> impl Strategy<Value = GL2Matrix> {
    prop::collection::vec((-4i128..=4, any::<bool>()), 1..6).prop_map(|steps| {
        steps.into_iter().fold(GL2Matrix::IDENTITY, |m, (t, upper)| {
            m.mul(&if upper { GL2Matrix::new(1, t, 0, 1) } else { GL2Matrix::new(1, 0, t, 1) })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn continued_fraction_round_trip(p in -1_000_000_000_000_000_000i64..=1_000_000_000_000_000_000, q in 1i64..=1_000_000_000_000_000_000) {
        let x = BigRational::new(BigInt::from(p), BigInt::from(q));
        let cf = ContinuedFraction::new(&x);
        prop_assert_eq!(cf.value(), x);
        for i in 0..cf.len() {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            prop_assert_eq!(cf.determinant(i), BigInt::from(sign));
        }
    }

    #[test]
    fn kronecker_is_multiplicative(a in -10_000i128..=10_000, m in 1i128..=3000, n in 1i128..=3000) {
        prop_assert_eq!(kronecker_i128(a, m * n), kronecker_i128(a, m) * kronecker_i128(a, n));
        if gcd_i128(a, m) != 1 {
            prop_assert_eq!(kronecker_i128(a, m), 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn discriminant_is_preserved(a in -500i128..=500, b in -500i128..=500, c in -500i128..=500, m in unimodular()) {
        let q = QuadForm::new(a, b, c);
        prop_assert_eq!(q.apply(&m).unwrap().disc(), q.disc());
    }

    #[test]
    fn genus_character_is_gamma0_invariant(seed in any::<u64>(), pick in 0usize..4) {
        let (d0, n) = [(29i64, 7u64), (61, 15), (89, 22), (-4, 5)][pick];
        let chi = GenusCharacter::new(d0, n).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let q = common::random_admissible(&mut rng, &chi);
        let g = common::random_gamma0(&mut rng, n as i128);
        let v = chi.eval(&q).unwrap();
        prop_assert_eq!(chi.eval(&q.apply(&g).unwrap()).unwrap(), v);
        prop_assert_eq!(chi.eval(&q.neg()).unwrap(), d0.signum() as i8 * v);
    }

    #[test]
    fn fast_enumerator_matches_oracle(delta in discriminant(), n in prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10]), x in small_rational()) {
        let q = StraddlingQuery::new(delta, n, x).unwrap();
        let fast = enumerate_straddling_fast(&q).unwrap();
        let oracle: BTreeSet<_> = enumerate_straddling_oracle(&q).unwrap().into_iter().collect();
        prop_assert_eq!(fast.len(), oracle.len());
        prop_assert_eq!(fast.into_iter().collect::<BTreeSet<_>>(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn script_polynomial_is_translation_invariant(d in table_d(), x in small_rational(), shift in -3i64..=3) {
        let lp = level7(d);
        prop_assert_eq!(lp.eval(&(&x + rat(shift, 1))).unwrap(), lp.eval(&x).unwrap());
    }

    #[test]
    fn fricke_identities_hold(d in table_d(), x in small_rational().prop_filter("x ≠ 0", |x| *x != rat(0, 1))) {
        let lp = level7(d);
        let p = lp.params();
        let w = -(rat(1, 1) / (rat(7, 1) * &x));
        let slash = rat(7, 1) * rat_pow(&x, 2);
        let simple = simple_form_polynomial(p, &x).unwrap();
        prop_assert_eq!(&simple, &(lp.eval(&x).unwrap() - &slash * lp.eval(&w).unwrap()));
        prop_assert_eq!(&slash * simple_form_polynomial(p, &w).unwrap() - &simple, -rat(2, 1) * &simple);
    }

    #[test]
    fn hecke_factors_commute(d in table_d(), x in small_rational(), p1 in prop::sample::select(vec![2u64, 3, 5]), p2 in prop::sample::select(vec![2u64, 3, 5])) {
        let lp = level7(d);
        let fwd = HeckePolynomial::parse_factors(&format!("{p1}:1,{p2}:-2")).unwrap();
        let mut rev = fwd.clone();
        rev.terms.reverse();
        let xs = [x];
        prop_assert_eq!(apply_polynomial(lp, &fwd, 2, &xs).unwrap(), apply_polynomial(lp, &rev, 2, &xs).unwrap());
    }
}
