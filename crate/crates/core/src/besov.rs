//! The discrete weighted sequence quasinorm and the weighted `L^p` error
//! functional.
//!
//! For a coefficient field `λ`, parameters `1 ≤ p, q ≤ ∞`, a smoothness
//! functional `δ`, and an exponential weight `w`, the quasinorm is
//!
//! ```text
//! ‖λ‖ = ( Σ_{k̄} 2^{q·δ(k̄)} · S_{k̄}^{q/p} )^{1/q},
//! S_{k̄} = Σ_{m̄} |λ_{k̄,m̄}|^p · 2^{p·|k̄|₁/2} · w(Q_{k̄,m̄}),
//! ```
//!
//! with the usual suprema at `p = ∞` or `q = ∞`. This is the exact value of
//! the level-wise weighted `L^p` norms of `Σ_m |λ| 2^{|k̄|₁/2} χ_{Q_{k̄,m̄}}`:
//! the dyadic boxes at a fixed level are disjoint, so the integral splits
//! into the per-box terms above with the *stored* level vector indexing the
//! boxes. As `p → ∞` the factor `w(Q)^{1/p} → 1`, which is why the weight
//! drops out of the inner supremum.
//!
//! The membership constraints tying `δ` to the analysing system's regularity
//! budget `L` (strictly `δ(j̄) < L·|j̄|₁`) and the weight rate to `p`
//! (`max(b/(p-1), b/p)` must stay below the basis decay budget — vacuous for
//! compactly supported bases, surfaced as advice, never an error) live on
//! [`BesovParams`].

use alloc::format;

use crate::error::{Error, Result};
use crate::index::IndexNorm;
use crate::math;
use crate::wavelet::CoefficientField;
use crate::weight::{weight_measure, DyadicBox, ExponentialWeight};

/// Probe radius used when validating the smoothness bound `δ < L·|j̄|₁`.
const SMOOTHNESS_PROBE_RADIUS: u32 = 4;

/// Integrability exponents, smoothness functional, weight, and regularity
/// budget for the sequence quasinorm.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovParams {
    p: f64,
    q: f64,
    delta: IndexNorm,
    weight: ExponentialWeight,
    regularity: u32,
}

impl BesovParams {
    /// `p, q ∈ [1, ∞]` (use `f64::INFINITY` for `∞`), `regularity ≥ 1`.
    pub fn new(
        p: f64,
        q: f64,
        delta: IndexNorm,
        weight: ExponentialWeight,
        regularity: u32,
    ) -> Result<Self> {
        for (name, value) in [("p", p), ("q", q)] {
            if value.is_nan() || value < 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "exponent {name} = {value} must lie in [1, inf]"
                )));
            }
        }
        if regularity == 0 {
            return Err(Error::InvalidParameter(
                "regularity budget must be a positive integer".into(),
            ));
        }
        Ok(BesovParams { p, q, delta, weight, regularity })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn delta(&self) -> &IndexNorm {
        &self.delta
    }

    pub fn weight(&self) -> &ExponentialWeight {
        &self.weight
    }

    pub fn regularity(&self) -> u32 {
        self.regularity
    }

    /// Check the parameters against a concrete dimension: the functional
    /// must accept it and must respect `δ(j̄) < L·|j̄|₁` on the probe box.
    pub fn validate_for_dim(&self, dim: usize) -> Result<()> {
        if !self
            .delta
            .check_smoothness_bound(self.regularity, SMOOTHNESS_PROBE_RADIUS, dim)?
        {
            return Err(Error::InvalidParameter(format!(
                "smoothness functional reaches the regularity budget L = {} \
                 on some level; it must stay strictly below L·|j̄|₁",
                self.regularity
            )));
        }
        Ok(())
    }

    /// The weight-decay rate the analysing system must dominate for the
    /// sequence norm to be equivalent to a function-space norm:
    /// `max(b/(p-1), b/p)`, `∞` at `p = 1` with a positive rate.
    ///
    /// Compactly supported bases have unlimited decay budget, so this is
    /// advisory; surface it, do not enforce it.
    pub fn decay_requirement(&self) -> f64 {
        let b = self.weight.rate();
        if b == 0.0 {
            return 0.0;
        }
        if self.p == 1.0 {
            return f64::INFINITY;
        }
        if self.p.is_infinite() {
            return 0.0;
        }
        (b / (self.p - 1.0)).max(b / self.p)
    }
}

/// The weighted sequence quasinorm of a coefficient field.
///
/// Empty fields have quasinorm 0. Reductions run in canonical key order, so
/// the value is reproducible bit for bit.
pub fn sequence_quasinorm(coeffs: &CoefficientField, params: &BesovParams) -> Result<f64> {
    params.validate_for_dim(coeffs.dim())?;
    if let Some(required) = params.delta.dim_requirement() {
        if required != coeffs.dim() {
            return Err(Error::DimensionMismatch { expected: required, found: coeffs.dim() });
        }
    }

    let p = params.p;
    let q = params.q;
    let mut outer = 0.0f64; // sum for finite q, running sup otherwise
    for (level, entries) in coeffs.levels() {
        let half_l1 = math::exp2(level.l1() as f64 / 2.0); // 2^{|k̄|₁/2}
        let inner = if p.is_infinite() {
            let mut sup = 0.0f64;
            for &value in entries.values() {
                sup = sup.max(math::abs(value) * half_l1);
            }
            sup
        } else {
            let mut sum = 0.0f64;
            for (m, &value) in entries {
                let q_box = DyadicBox::new(level.clone(), m.clone())?;
                let mass = weight_measure(params.weight(), &q_box);
                sum += math::powf(math::abs(value) * half_l1, p) * mass;
            }
            math::powf(sum, 1.0 / p)
        };
        let contribution = math::exp2(params.delta.eval(level)?) * inner;
        if q.is_infinite() {
            outer = outer.max(contribution);
        } else {
            outer += math::powf(contribution, q);
        }
    }
    let norm = if q.is_infinite() { outer } else { math::powf(outer, 1.0 / q) };
    if !norm.is_finite() {
        return Err(Error::NumericalFailure(format!(
            "sequence quasinorm overflowed (value {norm})"
        )));
    }
    Ok(norm)
}

/// Weighted `L^p` distance `‖f - g‖_{L^p_w}` over the box `[-R, R]^d`,
/// by the composite trapezoid rule with `samples_per_axis` subintervals
/// per axis (at least 8).
///
/// At `p = ∞` this degenerates to the unweighted sup over the sample
/// points, consistent with `w^{1/p} → 1`.
pub fn lpw_error<F, G>(
    f: F,
    g: G,
    p: f64,
    weight: &ExponentialWeight,
    dim: usize,
    box_radius: f64,
    samples_per_axis: u32,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must lie in [1, inf]")));
    }
    if !(box_radius > 0.0 && box_radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "box radius {box_radius} must be finite and positive"
        )));
    }
    if samples_per_axis < 8 {
        return Err(Error::InvalidParameter(format!(
            "samples_per_axis = {samples_per_axis} is below the minimum of 8"
        )));
    }

    let n = samples_per_axis as usize;
    let h = 2.0 * box_radius / n as f64;
    let mut x = alloc::vec![0.0f64; dim];
    let mut idx = alloc::vec![0usize; dim];
    let mut acc = 0.0f64; // integral for finite p, running sup otherwise
    loop {
        let mut trap_weight = 1.0;
        for axis in 0..dim {
            x[axis] = -box_radius + idx[axis] as f64 * h;
            if idx[axis] == 0 || idx[axis] == n {
                trap_weight *= 0.5;
            }
        }
        let diff = math::abs(f(&x) - g(&x));
        if p.is_infinite() {
            acc = acc.max(diff);
        } else {
            acc += trap_weight * math::powf(diff, p) * weight.eval(&x);
        }

        let mut axis = dim;
        loop {
            if axis == 0 {
                let result = if p.is_infinite() {
                    acc
                } else {
                    math::powf(acc * math::powf(h, dim as f64), 1.0 / p)
                };
                if !result.is_finite() {
                    return Err(Error::NumericalFailure(format!(
                        "weighted error functional is not finite (value {result})"
                    )));
                }
                return Ok(result);
            }
            axis -= 1;
            if idx[axis] < n {
                idx[axis] += 1;
                break;
            }
            idx[axis] = 0;
        }
    }
}
