//! Anisotropic level and translation indices, and the level-dependent
//! smoothness functionals `δ : ℕ₀^d → [0, ∞)` built over them.
//!
//! Classical smoothness scales damp a coefficient at level `j̄` by
//! `2^{s·|j̄|₁}` for a single exponent `s`. Here the exponent is replaced by a
//! functional of the whole level vector, which lets different coordinate
//! directions carry different smoothness and lets isotropic and
//! dominating-mixed smoothness interpolate continuously. Three shapes cover
//! the scales of interest:
//!
//! * [`IndexNorm::WeightedL1`] — `δ(j̄) = Σᵢ sᵢ·jᵢ` with `sᵢ ≥ 0`
//!   (dominating mixed smoothness; anisotropic when the `sᵢ` differ),
//! * [`IndexNorm::ScaledLinf`] — `δ(j̄) = s·maxᵢ jᵢ` with `s ≥ 0`
//!   (isotropic smoothness),
//! * [`IndexNorm::Mix`] — `δ = (1-θ)·δ_first + θ·δ_second` with `θ ∈ (0, 1)`,
//!   the convex combination realising the interpolation scale between its two
//!   constituents.
//!
//! All three are nonnegative, vanish at `j̄ = 0`, are monotone under
//! coordinatewise comparison, positively homogeneous under integer scaling,
//! and subadditive — the properties the grid construction and the sequence
//! quasinorm rely on. Property tests at the bottom of this module pin each of
//! them down.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A level multi-index `j̄ ∈ ℕ₀^d`.
///
/// Ordered lexicographically (derived `Ord`), which is the canonical ordering
/// for every level-keyed map in this crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelIndex(Vec<u32>);

impl LevelIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        LevelIndex(entries)
    }

    pub fn from_slice(entries: &[u32]) -> Self {
        LevelIndex(entries.to_vec())
    }

    /// All-zero level in dimension `dim` (the pure scaling-function level).
    pub fn zero(dim: usize) -> Self {
        LevelIndex(alloc::vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `|j̄|₁ = Σᵢ jᵢ`.
    pub fn l1(&self) -> u64 {
        self.0.iter().map(|&j| u64::from(j)).sum()
    }

    /// `|j̄|∞ = maxᵢ jᵢ` (0 for the empty index).
    pub fn linf(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&j| j == 0)
    }
}

/// A translation multi-index `m̄ ∈ ℤ^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TranslationIndex(Vec<i64>);

impl TranslationIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        TranslationIndex(entries)
    }

    pub fn from_slice(entries: &[i64]) -> Self {
        TranslationIndex(entries.to_vec())
    }

    pub fn zero(dim: usize) -> Self {
        TranslationIndex(alloc::vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// `|m̄|₁ = Σᵢ |mᵢ|`.
    pub fn l1(&self) -> u64 {
        self.0.iter().map(|&m| m.unsigned_abs()).sum()
    }

    /// `|m̄|∞ = maxᵢ |mᵢ|` (0 for the empty index).
    pub fn linf(&self) -> u64 {
        self.0.iter().map(|&m| m.unsigned_abs()).max().unwrap_or(0)
    }
}

/// A level-dependent smoothness functional `δ(j̄)`.
///
/// Construct through [`IndexNorm::weighted_l1`], [`IndexNorm::scaled_linf`]
/// and [`IndexNorm::mix`], which validate their parameter domains; evaluate
/// with [`IndexNorm::eval`].
#[derive(Debug, Clone, PartialEq)]
pub enum IndexNorm {
    /// `δ(j̄) = Σᵢ sᵢ·jᵢ`, all `sᵢ ≥ 0` and finite.
    WeightedL1 { weights: Vec<f64> },
    /// `δ(j̄) = s·maxᵢ jᵢ`, `s ≥ 0` and finite. Dimension-agnostic.
    ScaledLinf { scale: f64 },
    /// `δ(j̄) = (1-θ)·δ_first(j̄) + θ·δ_second(j̄)`, `θ ∈ (0, 1)` strictly.
    Mix {
        theta: f64,
        first: Box<IndexNorm>,
        second: Box<IndexNorm>,
    },
}

impl IndexNorm {
    /// Weighted ℓ¹ functional with per-direction smoothness weights `sᵢ ≥ 0`.
    pub fn weighted_l1(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter(
                "weighted_l1 needs at least one weight".into(),
            ));
        }
        for (i, &s) in weights.iter().enumerate() {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "weighted_l1 weight s[{i}] = {s} must be finite and >= 0"
                )));
            }
        }
        Ok(IndexNorm::WeightedL1 { weights })
    }

    /// Scaled ℓ∞ functional `δ(j̄) = s·|j̄|∞` with `s ≥ 0`.
    pub fn scaled_linf(scale: f64) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scaled_linf scale {scale} must be finite and >= 0"
            )));
        }
        Ok(IndexNorm::ScaledLinf { scale })
    }

    /// Convex mixture `(1-θ)·first + θ·second` with `θ ∈ (0, 1)` strictly.
    ///
    /// The endpoints `θ = 0` and `θ = 1` are deliberately excluded: they *are*
    /// the constituent functionals, so callers sweeping `θ` over a closed
    /// interval should use `first` or `second` directly at the ends.
    pub fn mix(theta: f64, first: IndexNorm, second: IndexNorm) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "mix parameter theta = {theta} must lie strictly inside (0, 1)"
            )));
        }
        if let (Some(a), Some(b)) = (first.dim_requirement(), second.dim_requirement()) {
            if a != b {
                return Err(Error::DimensionMismatch { expected: a, found: b });
            }
        }
        Ok(IndexNorm::Mix {
            theta,
            first: Box::new(first),
            second: Box::new(second),
        })
    }

    /// The dimension this functional insists on, if any.
    ///
    /// `WeightedL1` fixes the dimension through its weight vector;
    /// `ScaledLinf` applies in any dimension; a `Mix` inherits the
    /// requirement of its constituents (consistent by construction).
    pub fn dim_requirement(&self) -> Option<usize> {
        match self {
            IndexNorm::WeightedL1 { weights } => Some(weights.len()),
            IndexNorm::ScaledLinf { .. } => None,
            IndexNorm::Mix { first, second, .. } => {
                first.dim_requirement().or_else(|| second.dim_requirement())
            }
        }
    }

    /// Whether this functional can evaluate indices of dimension `dim`.
    pub fn accepts_dim(&self, dim: usize) -> bool {
        self.dim_requirement().is_none_or(|d| d == dim)
    }

    /// Evaluate `δ(j̄)`.
    ///
    /// Errors with [`Error::DimensionMismatch`] when `j̄` has a different
    /// dimension than the functional requires. The result is always finite
    /// and nonnegative, and `δ(0̄) = 0`.
    pub fn eval(&self, j: &LevelIndex) -> Result<f64> {
        match self {
            IndexNorm::WeightedL1 { weights } => {
                if weights.len() != j.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: weights.len(),
                        found: j.dim(),
                    });
                }
                let mut acc = 0.0;
                for (s, &ji) in weights.iter().zip(j.as_slice()) {
                    acc += s * f64::from(ji);
                }
                Ok(acc)
            }
            IndexNorm::ScaledLinf { scale } => Ok(scale * f64::from(j.linf())),
            IndexNorm::Mix { theta, first, second } => {
                let a = first.eval(j)?;
                let b = second.eval(j)?;
                Ok((1.0 - theta) * a + theta * b)
            }
        }
    }

    /// Check the strict growth bound `δ(j̄) < L·|j̄|₁` for every nonzero
    /// `j̄` with `|j̄|∞ ≤ probe_radius` in dimension `dim`.
    ///
    /// The bound caps how much smoothness the functional may demand relative
    /// to the regularity budget `L` of the analysing wavelet system; sequence
    /// and function space only coincide below it. By positive homogeneity of
    /// all three functional shapes, violations on any scale already show up
    /// on the probed box, but the radius is kept explicit as defence in
    /// depth. Note the inequality is strict: `δ = L·|j̄|₁` on some axis
    /// already fails.
    pub fn check_smoothness_bound(&self, l: u32, probe_radius: u32, dim: usize) -> Result<bool> {
        if l == 0 {
            return Err(Error::InvalidParameter(
                "growth bound L must be a positive integer".into(),
            ));
        }
        if probe_radius == 0 {
            return Err(Error::InvalidParameter(
                "probe radius must be a positive integer".into(),
            ));
        }
        if !self.accepts_dim(dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim_requirement().unwrap_or(dim),
                found: dim,
            });
        }
        let l = f64::from(l);
        let mut ok = true;
        for_each_multi_index(dim, probe_radius, &mut |j: &[u32]| {
            let j = LevelIndex::from_slice(j);
            if j.is_zero() {
                return;
            }
            // Dimension already checked, so eval cannot fail here.
            let delta = self.eval(&j).unwrap_or(f64::INFINITY);
            if delta >= l * j.l1() as f64 {
                ok = false;
            }
        });
        Ok(ok)
    }
}

/// Visit every multi-index in `{0, …, cap}^dim` in lexicographic order.
///
/// Odometer-style enumeration; shared by the smoothness-bound probe, the
/// grid-level scan and the brute-force test oracles.
pub(crate) fn for_each_multi_index(dim: usize, cap: u32, visit: &mut dyn FnMut(&[u32])) {
    let mut current = alloc::vec![0u32; dim];
    loop {
        visit(&current);
        // Increment from the last coordinate, carrying leftwards.
        let mut pos = dim;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if current[pos] < cap {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn l1(weights: &[f64]) -> IndexNorm {
        IndexNorm::weighted_l1(weights.to_vec()).unwrap()
    }

    fn linf(scale: f64) -> IndexNorm {
        IndexNorm::scaled_linf(scale).unwrap()
    }

    #[test]
    fn weighted_l1_evaluates_inner_product() {
        let norm = l1(&[1.0, 1.0]);
        let j = LevelIndex::new(vec![2, 3]);
        assert_eq!(norm.eval(&j).unwrap(), 5.0);

        let aniso = l1(&[0.5, 2.0]);
        assert_eq!(aniso.eval(&j).unwrap(), 0.5 * 2.0 + 2.0 * 3.0);
    }

    #[test]
    fn scaled_linf_evaluates_max() {
        let norm = linf(1.0);
        assert_eq!(norm.eval(&LevelIndex::new(vec![2, 3])).unwrap(), 3.0);
        assert_eq!(norm.eval(&LevelIndex::new(vec![7])).unwrap(), 7.0);
        let scaled = linf(0.25);
        assert_eq!(scaled.eval(&LevelIndex::new(vec![2, 4])).unwrap(), 1.0);
    }

    #[test]
    fn mix_is_the_convex_combination() {
        let norm = IndexNorm::mix(0.75, l1(&[1.0, 1.0]), linf(1.0)).unwrap();
        let j = LevelIndex::new(vec![2, 3]);
        // 0.25·(2+3) + 0.75·max(2,3) = 1.25 + 2.25
        assert_eq!(norm.eval(&j).unwrap(), 3.5);
    }

    #[test]
    fn zero_level_maps_to_zero() {
        let norms = [
            l1(&[1.5, 0.25, 3.0]),
            linf(2.0),
            IndexNorm::mix(0.5, l1(&[1.0, 1.0, 1.0]), linf(4.0)).unwrap(),
        ];
        for norm in &norms {
            assert_eq!(norm.eval(&LevelIndex::zero(3)).unwrap(), 0.0);
        }
    }

    #[test]
    fn eval_rejects_mismatched_dimension() {
        let norm = l1(&[1.0, 1.0]);
        let err = norm.eval(&LevelIndex::new(vec![1, 2, 3])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn constructors_validate_domains() {
        assert!(IndexNorm::weighted_l1(vec![]).is_err());
        assert!(IndexNorm::weighted_l1(vec![1.0, -0.5]).is_err());
        assert!(IndexNorm::weighted_l1(vec![f64::NAN]).is_err());
        assert!(IndexNorm::scaled_linf(-1.0).is_err());
        assert!(IndexNorm::scaled_linf(f64::INFINITY).is_err());
        assert!(IndexNorm::mix(0.0, linf(1.0), linf(2.0)).is_err());
        assert!(IndexNorm::mix(1.0, linf(1.0), linf(2.0)).is_err());
        // Mix of functionals pinned to different dimensions is rejected.
        assert!(IndexNorm::mix(0.5, l1(&[1.0]), l1(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn dim_requirement_propagates_through_mix() {
        assert_eq!(l1(&[1.0, 1.0]).dim_requirement(), Some(2));
        assert_eq!(linf(1.0).dim_requirement(), None);
        let mixed = IndexNorm::mix(0.5, linf(1.0), l1(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(mixed.dim_requirement(), Some(3));
        assert!(mixed.accepts_dim(3));
        assert!(!mixed.accepts_dim(2));
    }

    #[test]
    fn smoothness_bound_accepts_room_below_regularity() {
        // δ = |j̄|₁ grows strictly slower than 2·|j̄|₁.
        assert!(l1(&[1.0, 1.0]).check_smoothness_bound(2, 4, 2).unwrap());
        // δ = 0.999·|j̄|∞ stays strictly below |j̄|₁ everywhere.
        assert!(linf(0.999).check_smoothness_bound(1, 4, 2).unwrap());
    }

    #[test]
    fn smoothness_bound_rejects_equality_on_axis_levels() {
        // On j̄ = (j, 0) the scaled ℓ∞ functional with s = L meets L·|j̄|₁
        // exactly, and the bound is strict.
        assert!(!linf(1.0).check_smoothness_bound(1, 4, 2).unwrap());
        // A single direction demanding too much smoothness is also caught:
        // δ((0,1)) = 3 ≥ 2·1.
        assert!(!l1(&[1.0, 3.0]).check_smoothness_bound(2, 4, 2).unwrap());
    }

    #[test]
    fn smoothness_bound_validates_inputs() {
        assert!(linf(1.0).check_smoothness_bound(0, 4, 2).is_err());
        assert!(linf(1.0).check_smoothness_bound(1, 0, 2).is_err());
        assert!(l1(&[1.0, 1.0]).check_smoothness_bound(1, 4, 3).is_err());
    }

    #[test]
    fn multi_index_enumeration_is_lexicographic_and_complete() {
        let mut seen = vec![];
        for_each_multi_index(2, 2, &mut |j| seen.push(j.to_vec()));
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[0], vec![0, 0]);
        assert_eq!(seen[1], vec![0, 1]);
        assert_eq!(seen[8], vec![2, 2]);
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(seen, sorted);
    }

    /// A small zoo of valid functionals in a given dimension.
    fn arb_norm(dim: usize) -> BoxedStrategy<IndexNorm> {
        let weights = proptest::collection::vec(0.0f64..4.0, dim);
        let leaf_l1 = weights.prop_map(|w| IndexNorm::weighted_l1(w).unwrap());
        let leaf_linf = (0.0f64..4.0).prop_map(|s| IndexNorm::scaled_linf(s).unwrap());
        let leaves = prop_oneof![leaf_l1, leaf_linf].boxed();
        let mixes = (0.05f64..0.95, leaves.clone(), leaves.clone())
            .prop_map(|(t, a, b)| IndexNorm::mix(t, a, b).unwrap());
        prop_oneof![leaves, mixes.boxed()].boxed()
    }

    fn arb_level(dim: usize) -> impl Strategy<Value = LevelIndex> {
        proptest::collection::vec(0u32..=4, dim).prop_map(LevelIndex::new)
    }

    proptest! {
        #[test]
        fn eval_is_nonnegative_and_finite(
            (dim, norm, j) in (1usize..=3).prop_flat_map(|d| {
                (Just(d), arb_norm(d), arb_level(d))
            })
        ) {
            let _ = dim;
            let v = norm.eval(&j).unwrap();
            prop_assert!(v.is_finite());
            prop_assert!(v >= 0.0);
        }
    }

    proptest! {
        #[test]
        fn monotone_under_coordinatewise_growth(
            (dim, norm, j, extra) in (1usize..=3).prop_flat_map(|d| {
                (Just(d), arb_norm(d), arb_level(d),
                 proptest::collection::vec(0u32..=3, d))
            })
        ) {
            let _ = dim;
            let larger = LevelIndex::new(
                j.as_slice().iter().zip(&extra).map(|(&a, &b)| a + b).collect(),
            );
            prop_assert!(norm.eval(&j).unwrap() <= norm.eval(&larger).unwrap() + 1e-12);
        }
    }

    proptest! {
        #[test]
        fn positively_homogeneous_under_integer_scaling(
            (dim, norm, j, c) in (1usize..=3).prop_flat_map(|d| {
                (Just(d), arb_norm(d), arb_level(d), 0u32..=5)
            })
        ) {
            let _ = dim;
            let scaled = LevelIndex::new(j.as_slice().iter().map(|&a| a * c).collect());
            let lhs = norm.eval(&scaled).unwrap();
            let rhs = f64::from(c) * norm.eval(&j).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }

    proptest! {
        #[test]
        fn subadditive_in_the_level(
            (dim, norm, j, k) in (1usize..=3).prop_flat_map(|d| {
                (Just(d), arb_norm(d), arb_level(d), arb_level(d))
            })
        ) {
            let _ = dim;
            let sum = LevelIndex::new(
                j.as_slice().iter().zip(k.as_slice()).map(|(&a, &b)| a + b).collect(),
            );
            let lhs = norm.eval(&sum).unwrap();
            let rhs = norm.eval(&j).unwrap() + norm.eval(&k).unwrap();
            prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()));
        }
    }

    proptest! {
        #[test]
        fn mix_matches_manual_combination(
            (dim, a, b, theta, j) in (1usize..=3).prop_flat_map(|d| {
                (Just(d), arb_norm(d), arb_norm(d), 0.05f64..0.95, arb_level(d))
            })
        ) {
            let _ = dim;
            prop_assume!(a.accepts_dim(j.dim()) && b.accepts_dim(j.dim()));
            let Ok(mixed) = IndexNorm::mix(theta, a.clone(), b.clone()) else {
                // Constituents pinned to different dimensions; nothing to test.
                return Ok(());
            };
            let expect = (1.0 - theta) * a.eval(&j).unwrap() + theta * b.eval(&j).unwrap();
            prop_assert_eq!(mixed.eval(&j).unwrap(), expect);
        }
    }
}
