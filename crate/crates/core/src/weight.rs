//! Exponential weights `w(x) = exp(b·|x|₁)` and exact measures of dyadic
//! boxes under them.
//!
//! The weight is submultiplicative along translations,
//! `w(x) ≤ w(x-y)·exp(b·|y|₁)`, which is the property that lets weighted
//! norms localise onto dyadic boxes. Because `|x|₁` separates across
//! coordinates, the weighted measure of an axis-aligned box factors into
//! one-dimensional integrals of `exp(b·|t|)`, each of which has a closed
//! form; no quadrature is involved anywhere in this module.

use alloc::format;

use crate::error::{Error, Result};
use crate::index::{LevelIndex, TranslationIndex};
use crate::math;

/// The weight `w(x) = exp(rate·|x|₁)` with `rate ≥ 0`.
///
/// `rate = 0` is the unweighted (Lebesgue) case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialWeight {
    rate: f64,
}

impl ExponentialWeight {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight rate b = {rate} must be finite and >= 0"
            )));
        }
        Ok(ExponentialWeight { rate })
    }

    /// The Lebesgue case `w ≡ 1`.
    pub fn unweighted() -> Self {
        ExponentialWeight { rate: 0.0 }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Pointwise value `w(x) = exp(rate·Σᵢ|xᵢ|)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut l1 = 0.0;
        for &xi in x {
            l1 += math::abs(xi);
        }
        math::exp(self.rate * l1)
    }
}

/// The half-open dyadic box `Q_{j̄,m̄} = Πᵢ [2^{-jᵢ}·mᵢ, 2^{-jᵢ}·(mᵢ+1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicBox {
    level: LevelIndex,
    translation: TranslationIndex,
}

impl DyadicBox {
    pub fn new(level: LevelIndex, translation: TranslationIndex) -> Result<Self> {
        if level.dim() != translation.dim() {
            return Err(Error::DimensionMismatch {
                expected: level.dim(),
                found: translation.dim(),
            });
        }
        Ok(DyadicBox { level, translation })
    }

    pub fn dim(&self) -> usize {
        self.level.dim()
    }

    pub fn level(&self) -> &LevelIndex {
        &self.level
    }

    pub fn translation(&self) -> &TranslationIndex {
        &self.translation
    }

    /// Endpoints `[2^{-jᵢ}·mᵢ, 2^{-jᵢ}·(mᵢ+1))` along `axis`.
    ///
    /// Both endpoints are exact dyadic rationals, hence exact in `f64` for
    /// every level and translation this crate produces.
    pub fn bounds(&self, axis: usize) -> (f64, f64) {
        let scale = math::exp2(-f64::from(self.level.as_slice()[axis]));
        let m = self.translation.as_slice()[axis] as f64;
        (m * scale, (m + 1.0) * scale)
    }

    /// Lebesgue volume `2^{-|j̄|₁}`.
    pub fn volume(&self) -> f64 {
        math::exp2(-(self.level.l1() as f64))
    }
}

/// Exact weighted measure `∫_Q w(x) dx` of a dyadic box.
///
/// Factors over the axes; each factor is the closed-form integral of
/// `exp(b·|t|)` over `[α, β)`:
///
/// * `b = 0`:               `β - α`,
/// * `0 ≤ α`:               `e^{bα}·(e^{b(β-α)} - 1)/b`,
/// * `β ≤ 0`:               `e^{-bβ}·(e^{b(β-α)} - 1)/b`,
/// * `α < 0 < β`:           `((e^{-bα} - 1) + (e^{bβ} - 1))/b`.
///
/// The `expm1` forms avoid cancellation on the short boxes at fine levels.
pub fn weight_measure(weight: &ExponentialWeight, bx: &DyadicBox) -> f64 {
    let b = weight.rate();
    let mut product = 1.0;
    for axis in 0..bx.dim() {
        let (alpha, beta) = bx.bounds(axis);
        let factor = if b == 0.0 {
            beta - alpha
        } else if alpha >= 0.0 {
            math::exp(b * alpha) * libm::expm1(b * (beta - alpha)) / b
        } else if beta <= 0.0 {
            math::exp(-b * beta) * libm::expm1(b * (beta - alpha)) / b
        } else {
            (libm::expm1(-b * alpha) + libm::expm1(b * beta)) / b
        };
        product *= factor;
    }
    product
}
