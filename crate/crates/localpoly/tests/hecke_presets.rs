use std::time::Instant;

use localpoly::hecke::{apply_polynomial, detect_vanishing, HeckePolynomial};
use localpoly::local_poly::{LocalPolyParams, LocalPolynomial};
use localpoly::nt::rat;

#[test]
fn level15_preset_at_half() {
    let p = LocalPolyParams::new(2, 15, 181, 61).unwrap();
    let lp = LocalPolynomial::new(&p).unwrap();
    let poly = HeckePolynomial::preset("level15").unwrap();
    let t = Instant::now();
    let v = apply_polynomial(&lp, &poly, 2, &[rat(1, 2)]).unwrap();
    eprintln!("level 15: {:?}", t.elapsed());
    assert_eq!(v[0], rat(100684800, 41503));
}

#[test]
fn level22_preset_at_half() {
    let p = LocalPolyParams::new(2, 22, 97, 89).unwrap();
    let lp = LocalPolynomial::new(&p).unwrap();
    let poly = HeckePolynomial::preset("level22").unwrap();
    let t = Instant::now();
    let v = apply_polynomial(&lp, &poly, 2, &[rat(1, 2)]).unwrap();
    eprintln!("level 22: {:?} ({} leaves)", t.elapsed(), lp.memo_len());
    assert_eq!(v[0], rat(649876483072, 362010675));
}

#[test]
fn factor_order_does_not_matter() {
    let p = LocalPolyParams::new(2, 15, 76, 61).unwrap();
    let lp = LocalPolynomial::new(&p).unwrap();
    let fwd = HeckePolynomial::preset("level15").unwrap();
    let mut rev = fwd.clone();
    rev.terms.reverse();
    let xs = [rat(1, 2), rat(2, 7)];
    assert_eq!(apply_polynomial(&lp, &fwd, 2, &xs).unwrap(), apply_polynomial(&lp, &rev, 2, &xs).unwrap());
}

#[test]
fn level15_vanishing_case() {
    let p = LocalPolyParams::new(2, 15, 229, 61).unwrap();
    let poly = HeckePolynomial::preset("level15").unwrap();
    let r = detect_vanishing(&p, &poly, &[rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7)]).unwrap();
    assert!(r.vanishing, "{:?}", r.values);
    eprintln!("{}", r.values[0]);
}
