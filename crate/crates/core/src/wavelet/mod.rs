//! Compactly supported orthogonal wavelets: filter construction, dyadic
//! tabulation, tensor-product evaluation, and coefficient analysis/synthesis.
//!
//! The one-dimensional system is the Daubechies family. For order `N` the
//! low-pass filter `h` has `2N` taps, the scaling function `φ` and mother
//! wavelet `ψ` are supported on `[0, 2N-1]`, and `ψ` has `N` vanishing
//! moments. The basis functions indexed by a stored level `k ∈ ℕ₀` and
//! translation `m ∈ ℤ` are
//!
//! ```text
//! k = 0:   φ(x - m)                       (scaling layer)
//! k ≥ 1:   2^{(k-1)/2} ψ(2^{k-1} x - m)   (wavelet layer at scale k-1)
//! ```
//!
//! so the stored level enumerates `V₀ ⊕ W₀ ⊕ W₁ ⊕ …` and the family over all
//! `(k, m)` is a complete orthonormal system. Multivariate functions use the
//! tensor product over coordinates with a full level vector `k̄`; each
//! coordinate independently picks the scaling or wavelet layer, which is what
//! makes anisotropic level sets meaningful.
//!
//! Everything downstream evaluates `φ` and `ψ` from a [`DyadicTable`] — exact
//! two-scale refinement of the integer values onto the grid `2^{-r}ℤ` — so
//! all quadrature in [`analyze`] happens on dyadically aligned points where
//! the table is exact.

mod analysis;
mod field;
mod filters;
mod table;

pub use analysis::{
    analyze, analysis_keys, coefficient, reconstruct, sample_function, synthesize, SampleGrid,
};
pub use field::CoefficientField;
pub use filters::{build_basis, WaveletBasis};
pub use table::{eval_1d, eval_tensor, tabulate, DyadicTable, FactorKind};
