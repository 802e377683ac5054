//! Exact evaluation of twisted local polynomials attached to locally harmonic
//! Maass forms, Hecke-operator polynomials acting on them, and the numerical
//! cross-checks (constant terms, Fourier coefficients, twisted L-values) that
//! accompany the resulting vanishing test for twisted central L-values.
//!
//! The exact path (`qforms`, `local_poly`, `hecke`) never touches floating
//! point. The analytic path (`class_numbers`, `analytic`, `lseries`) works in
//! `f64` and reports empirical error estimates.

pub mod analytic;
pub mod class_numbers;
pub mod error;
pub mod exec;
pub mod hecke;
pub mod local_poly;
pub mod lseries;
pub mod nt;
pub mod qforms;
pub mod tables;

pub use error::{Error, Result};
pub use local_poly::LocalPolyParams;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use qforms::QuadForm;
