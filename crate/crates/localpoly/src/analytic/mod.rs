//! Floating-point companions of the exact local polynomials: the cusp form
//! `f_{k,N,D,D₀}`, its Fourier coefficients, Eichler integrals, `Φ_k`, the
//! locally harmonic form `𝓕`, and the splitting checks that tie them to the
//! exact values.

mod coeffs;
mod eichler;
mod harmonic;
mod orbits;
pub mod special;
mod splitting;

pub use coeffs::{
    eval_f, eval_from_coeffs, extract_coeffs, fourier_coefficients, holomorphic_weight, orbit_integral, Evaluated,
    Extraction, FourierCoeffs, TailMode, TruncationPolicy,
};
pub use eichler::{eichler_integrals, holomorphic_eichler, nonholomorphic_eichler, phi, EichlerValues};
pub use harmonic::{
    eval_locally_harmonic_f, eval_locally_harmonic_f_completed, harmonic_tail, local_polynomial_at, splitting_weights,
    three_part_splitting, ThreePartSplitting, GEODESIC_EPS,
};
pub use orbits::{Orbit, OrbitTable};
pub use splitting::{estimate_delta, splitting_check, DeltaEstimate, SplittingCheck, PHI_DEGENERATE};
