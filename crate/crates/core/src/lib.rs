//! Wavelet-coefficient machinery for exponentially weighted, direction-aware
//! Besov-type smoothness spaces, together with the sparse coefficient grids
//! they induce.
//!
//! The crate is organised around four ingredients:
//!
//! * [`index`] — anisotropic level indices `j̄ ∈ ℕ₀^d`, translation indices
//!   `m̄ ∈ ℤ^d`, and the level-dependent smoothness functionals `δ(j̄)`
//!   (weighted ℓ¹, scaled ℓ∞, and convex mixtures thereof) that replace the
//!   single smoothness exponent of the classical scale.
//! * [`wavelet`] — Daubechies filter construction by spectral factorisation,
//!   dyadic tabulation of the scaling function and mother wavelet through the
//!   two-scale relation, tensor-product evaluation, and quadrature-based
//!   analysis / pointwise synthesis of coefficient fields.
//! * [`weight`] — the exponential weights `w(x) = exp(b·|x|₁)` and exact
//!   measures of dyadic boxes under them.
//! * [`besov`] and [`grid`] — the discrete weighted sequence quasinorm over
//!   coefficient fields, and the sparse grids obtained by keeping exactly
//!   those coefficients whose combined level/translation damping factor
//!   `2^{-Δ(j̄)}·exp(-b·|m̄/2^{j̄}|₁)` stays above a prescribed threshold
//!   `ε`, with the accompanying a-priori error bound.
//!
//! Everything here is deterministic: iteration follows the ordered coefficient
//! maps, and reductions are accumulated in a fixed order, so repeated runs
//! produce bitwise identical results.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only forwards float intrinsics and implements `std::error::Error`.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod besov;
pub mod error;
pub mod grid;
pub mod index;
pub(crate) mod math;
pub mod wavelet;
pub mod weight;

pub use besov::{lpw_error, sequence_quasinorm, BesovParams};
pub use error::Error;
pub use grid::{
    build_grid, error_bound, grid_centers, level_threshold, translation_distance, truncate,
    GridCenter, GridParams, SparseGrid,
};
pub use index::{IndexNorm, LevelIndex, TranslationIndex};
pub use wavelet::{
    analysis_keys, analyze, build_basis, coefficient, eval_1d, eval_tensor, reconstruct,
    sample_function, synthesize, tabulate, CoefficientField, DyadicTable, FactorKind, SampleGrid,
    WaveletBasis,
};
pub use weight::{weight_measure, DyadicBox, ExponentialWeight};

/// Magnitude below which analysis coefficients are dropped at construction.
///
/// Values this small are indistinguishable from quadrature noise at the
/// resolutions this crate works at, and storing them would make coefficient
/// fields (and everything ordered on top of them) depend on noise.
pub const COEFFICIENT_PRUNE_THRESHOLD: f64 = 1e-14;
