//! Spectral analysis of semi-infinite symmetric tridiagonal Hamiltonians whose
//! recursion coefficients `{a_n, b_n}` settle into a K-periodic pattern
//! (K = 1, 2, 3).
//!
//! The crate is organised bottom-up:
//!
//! - [`coefficients`]: builtin and custom coefficient models and their
//!   periodic limits.
//! - [`terminator`]: the closed-form tail of the continued fraction, its branch
//!   selection, and the 2K band boundaries.
//! - [`greens`]: `G00(z)` by truncated continued fraction, densities of states,
//!   pole residues and the normalization sum rule.
//! - [`polynomials`]: the associated orthogonal polynomials, their zeros, and
//!   bound-state detection from order-stable gap zeros.
//!
//! Everything here is pure computation; the crate builds without `std`
//! (disable the default `std` feature) and only needs `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod coefficients;
pub mod error;
pub mod greens;
mod poly;
pub mod polynomials;
pub mod terminator;

pub use coefficients::{
    asymptotics, coefficients, estimate_asymptotics, validate_model, Asymptotics, CoefficientModel,
    CoefficientTable, CustomModel, Estimate, TailLimit, ValidationReport,
};
pub use error::{Error, Result};
pub use greens::{
    bound_state_weight, density, density_curve, density_curve_second_kind, density_second_kind,
    g00, leading_diagonal, normalization, real_poles, DensityCurve, Normalization, Pole, Resolvent,
    SecondKindSeed,
};
pub use num_complex::Complex64;
pub use polynomials::{
    bound_states, classify_zeros, evaluate, evaluate_scaled, zeros, BoundState, BoundStateOptions,
    BoundStateReport, Candidate, PolynomialKind, ScaledValue, ZeroLabel, ZeroReport,
};
pub use terminator::{
    band_boundaries, band_structure, discriminant, terminator, BandStructure, Region, Side,
    TerminatorQuadratic,
};

/// Default truncation depth of the continued fraction.
pub const DEFAULT_DEPTH: usize = 2000;
