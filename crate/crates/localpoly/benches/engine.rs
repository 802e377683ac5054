//! One worker against the full pool on the three parallel hot loops. Build
//! with `--no-default-features` to time the sequential fallback itself.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use localpoly::exec;
use localpoly::hecke::{apply_polynomial, HeckePolynomial};
use localpoly::local_poly::{c_infty_series, LocalPolynomial, DEFAULT_A_MAX};
use localpoly::lseries::{expand_coeffs, load_fixture, required_depth, twisted_l, LSeriesOptions};
use localpoly::nt::rat;
use localpoly::LocalPolyParams;

const MODES: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn c_infty(c: &mut Criterion) {
    let p = LocalPolyParams::new(2, 7, 92, 29).unwrap();
    let mut g = c.benchmark_group("c_infty_series");
    for (name, threads) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec::with_threads(threads, || black_box(c_infty_series(&p, DEFAULT_A_MAX).unwrap().s)))
        });
    }
    g.finish();
}

fn hecke(c: &mut Criterion) {
    let p = LocalPolyParams::new(2, 15, 76, 61).unwrap();
    let poly = HeckePolynomial::preset("level15").unwrap();
    let xs = [rat(1, 2), rat(1, 7)];
    let mut g = c.benchmark_group("hecke_level15");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    for (name, threads) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec::with_threads(threads, || {
                    // A fresh memo per iteration so every leaf is evaluated.
                    let lp = LocalPolynomial::new(&p).unwrap();
                    black_box(apply_polynomial(&lp, &poly, 2, &xs).unwrap())
                })
            })
        });
    }
    g.finish();
}

fn lvalue(c: &mut Criterion) {
    let Ok(data) = load_fixture("22.4.a.b") else {
        eprintln!("skipping twisted_l: fixture 22.4.a.b not found");
        return;
    };
    let opts = LSeriesOptions::default();
    let d = 113;
    let table = expand_coeffs(&data, required_depth(data.level, d, &opts)).unwrap();
    let mut g = c.benchmark_group("twisted_l_level22");
    g.sample_size(20);
    for (name, threads) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec::with_threads(threads, || black_box(twisted_l(&data, &table, d, &opts).unwrap().value)))
        });
    }
    g.finish();
}

criterion_group!(benches, c_infty, hecke, lvalue);
criterion_main!(benches);
