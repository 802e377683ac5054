use std::time::Instant;

use localpoly::hecke::{detect_vanishing, HeckePolynomial};
use localpoly::lseries::{
    expand_coeffs, export_coefficients, fixture_label_for_level, functional_equation_check, ingest_coefficients,
    load_fixture, required_depth, twisted_l, twisted_l_from_data, LSeriesOptions, ZERO_TOL,
};
use localpoly::tables::references;
use localpoly::LocalPolyParams;

#[test]
fn level7_expansion_matches_q_series() {
    let data = load_fixture("7.4.a.a").unwrap();
    let t = expand_coeffs(&data, 9).unwrap();
    let got: Vec<i128> = (1..=9).map(|n| t.get(n)).collect();
    assert_eq!(got, vec![1, -1, -2, -7, 16, 2, -7, 15, -23]);
}

#[test]
fn level15_expansion_matches_q_series() {
    let data = load_fixture("15.4.a.b").unwrap();
    let t = expand_coeffs(&data, 5).unwrap();
    let got: Vec<i128> = (1..=5).map(|n| t.get(n)).collect();
    assert_eq!(got, vec![1, 3, -3, 1, -5]);
}

#[test]
fn multiplicativity_spot_checks() {
    let data = load_fixture("22.4.a.b").unwrap();
    let t = expand_coeffs(&data, 5000).unwrap();
    for (m, n) in [(3, 5), (7, 9), (11, 13), (25, 27), (8, 125), (49, 64)] {
        assert_eq!(t.get(m * n), t.get(m) * t.get(n), "a({m}·{n})");
    }
}

#[test]
fn export_then_ingest_is_identity() {
    let data = load_fixture("15.4.a.b").unwrap();
    let path = std::env::temp_dir().join(format!("localpoly-roundtrip-{}.json", std::process::id()));
    export_coefficients(&data, &path).unwrap();
    let back = ingest_coefficients(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(back, data);
}

#[test]
fn reference_values_to_six_digits() {
    let opts = LSeriesOptions::default();
    for r in &references().l_values {
        let t = Instant::now();
        let data = load_fixture(fixture_label_for_level(r.level).unwrap()).unwrap();
        let l = twisted_l_from_data(&data, r.d, &opts).unwrap();
        eprintln!("N={} D={}: {:.10} ± {:.1e} (ref {}) in {:?}", r.level, r.d, l.value, l.error, r.value, t.elapsed());
        if r.value == 0.0 {
            assert!(l.value.abs() < ZERO_TOL, "N={} D={}: {}", r.level, r.d, l.value);
            assert!(l.is_zero(ZERO_TOL));
        } else {
            assert!((l.value - r.value).abs() < 5e-7 * r.value.abs(), "N={} D={}: {}", r.level, r.d, l.value);
            assert!(!l.is_zero(ZERO_TOL));
        }
    }
}

#[test]
fn verdicts_agree_with_exact_detector() {
    let opts = LSeriesOptions::default();
    for level in [7u64, 15, 22] {
        let table = references().table(level).unwrap();
        let data = load_fixture(fixture_label_for_level(level).unwrap()).unwrap();
        let poly = HeckePolynomial::preset_for_level(level).unwrap();
        let l0 = twisted_l_from_data(&data, table.d0, &opts).unwrap();
        for col in &table.columns {
            let params = LocalPolyParams::new(2, level, col.d, table.d0).unwrap();
            let exact = detect_vanishing(&params, &poly, &params.default_samples(5)).unwrap();
            let l = twisted_l_from_data(&data, col.d, &opts).unwrap();
            let zero = l.is_zero(ZERO_TOL) || l0.is_zero(ZERO_TOL);
            assert_eq!(zero, exact.vanishing, "N={level} D={}", col.d);
        }
    }
}

#[test]
fn functional_equation_self_test() {
    let opts = LSeriesOptions::default();
    for (label, d) in [("7.4.a.a", 57), ("15.4.a.b", 76), ("22.4.a.b", 113), ("7.4.a.a", 37)] {
        let data = load_fixture(label).unwrap();
        let table = expand_coeffs(&data, required_depth(data.level, d, &opts)).unwrap();
        let fe = functional_equation_check(&data, &table, d, 0.1, &opts).unwrap();
        eprintln!("{label} D={d}: {} vs {} (error {:.1e})", fe.above, fe.below, fe.error);
        assert!(fe.discrepancy <= fe.error, "{label} D={d}: {fe:?}");
    }
}

#[test]
fn deeper_tables_stay_within_the_error_estimate() {
    let opts = LSeriesOptions::default();
    let data = load_fixture("22.4.a.b").unwrap();
    let d = 97;
    let depth = required_depth(data.level, d, &opts);
    let short = twisted_l(&data, &expand_coeffs(&data, depth).unwrap(), d, &opts).unwrap();
    let deeper = LSeriesOptions { cutoff: 50.0, ..opts };
    let long = twisted_l_from_data(&data, d, &deeper).unwrap();
    assert!((short.value - long.value).abs() <= short.error.max(1e-12), "{short:?} {long:?}");
}

#[test]
fn insufficient_depth_reports_requirement() {
    let opts = LSeriesOptions::default();
    let data = load_fixture("7.4.a.a").unwrap();
    let err = twisted_l(&data, &expand_coeffs(&data, 100).unwrap(), 57, &opts).unwrap_err().to_string();
    assert!(err.contains(&required_depth(7, 57, &opts).to_string()), "{err}");
}
