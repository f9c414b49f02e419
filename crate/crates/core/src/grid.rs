//! Weight-adapted sparse coefficient grids and their a-priori error bound.
//!
//! Fix two smoothness functionals `δ₁ ≤ δ₂`, a weight rate `b > 0` and a
//! threshold `ε > 0`. Approximating in the `δ₁` norm a function whose
//! weighted `δ₂` norm is finite, the coefficient at `(j̄, m̄)` carries a
//! damping factor
//!
//! ```text
//! 2^{-Δ(j̄)} · exp(-b·|m̄ ⊘ 2^{j̄}|₁),      Δ = δ₂ - δ₁,
//! |m̄ ⊘ 2^{j̄}|₁ = Σᵢ |mᵢ| / 2^{jᵢ},
//! ```
//!
//! the product of the level gap between the two scales and the weight
//! collected over the box `Q_{j̄,m̄}`. The grid keeps exactly the keys whose
//! factor is at least `ε`. Taking logarithms, level `j̄` survives with the
//! *threshold* `T(j̄) = -Δ(j̄)·ln 2 - ln ε ≥ 0`, and its members form the
//! weighted ℓ¹ ball `b·|m̄ ⊘ 2^{j̄}|₁ ≤ T(j̄)` — finitely many translations
//! per level, finitely many levels in total whenever `Δ` grows along every
//! direction.
//!
//! Comparisons are raw floating-point comparisons with no tie slack: a key
//! exactly on the boundary is kept. All set arithmetic (members, bound radii,
//! truncation) goes through the single canonical distance
//! [`translation_distance`], so no two code paths can disagree about a
//! boundary key.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::{for_each_multi_index, IndexNorm, LevelIndex, TranslationIndex};
use crate::math;
use crate::wavelet::{CoefficientField, WaveletBasis};
use crate::weight::ExponentialWeight;

/// Probe radius for the `δ₂ ≥ δ₁` dominance check at construction.
const DOMINANCE_PROBE_RADIUS: u32 = 4;

/// Hard cap on the number of grid points, to fail loudly instead of
/// exhausting memory on runaway parameters.
const MEMBER_LIMIT: u64 = 1 << 28;

/// Parameters of a sparse grid: the norm pair, the weight, and the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct GridParams {
    dim: usize,
    delta1: IndexNorm,
    delta2: IndexNorm,
    weight: ExponentialWeight,
    epsilon: f64,
}

impl GridParams {
    /// Validates: `dim ≥ 1`, both functionals accept `dim`, `ε > 0`,
    /// `b > 0` (a vanishing rate would retain infinitely many translations
    /// per level), and `δ₂ ≥ δ₁` on the probe box.
    pub fn new(
        dim: usize,
        delta1: IndexNorm,
        delta2: IndexNorm,
        weight: ExponentialWeight,
        epsilon: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("grid dimension must be at least 1".into()));
        }
        for (name, norm) in [("delta1", &delta1), ("delta2", &delta2)] {
            if !norm.accepts_dim(dim) {
                return Err(Error::InvalidParameter(format!(
                    "{name} requires dimension {:?}, grid has {dim}",
                    norm.dim_requirement()
                )));
            }
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "threshold epsilon = {epsilon} must be finite and positive"
            )));
        }
        if weight.rate() <= 0.0 {
            return Err(Error::InvalidParameter(
                "grid weight rate must be strictly positive; without weight decay \
                 every level would retain infinitely many translations"
                    .into(),
            ));
        }
        let mut dominated = true;
        for_each_multi_index(dim, DOMINANCE_PROBE_RADIUS, &mut |j: &[u32]| {
            let j = LevelIndex::from_slice(j);
            let d1 = delta1.eval(&j).unwrap_or(f64::INFINITY);
            let d2 = delta2.eval(&j).unwrap_or(f64::NEG_INFINITY);
            if d2 < d1 {
                dominated = false;
            }
        });
        if !dominated {
            return Err(Error::InvalidParameter(
                "delta2 must dominate delta1 on every level".into(),
            ));
        }
        Ok(GridParams { dim, delta1, delta2, weight, epsilon })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta1(&self) -> &IndexNorm {
        &self.delta1
    }

    pub fn delta2(&self) -> &IndexNorm {
        &self.delta2
    }

    pub fn weight(&self) -> &ExponentialWeight {
        &self.weight
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The level gap `Δ(j̄) = δ₂(j̄) - δ₁(j̄) ≥ 0`.
    pub fn level_gap(&self, level: &LevelIndex) -> Result<f64> {
        Ok(self.delta2.eval(level)? - self.delta1.eval(level)?)
    }
}

/// The weighted dyadic distance `|m̄ ⊘ 2^{j̄}|₁ = Σᵢ |mᵢ|·2^{-jᵢ}`,
/// accumulated in axis order.
///
/// This is the canonical membership quantity: every retain/drop decision in
/// this module tests `b·ρ ≤ T` with `ρ` computed by exactly this function,
/// so floating-point rounding cannot split a boundary key between code
/// paths. Each term is an exact dyadic product.
pub fn translation_distance(level: &LevelIndex, translation: &TranslationIndex) -> f64 {
    let mut rho = 0.0;
    for (j, m) in level.as_slice().iter().zip(translation.as_slice()) {
        rho += m.unsigned_abs() as f64 * math::exp2(-f64::from(*j));
    }
    rho
}

/// The level threshold `T(j̄) = -Δ(j̄)·ln 2 - ln ε`.
///
/// Level `j̄` retains translations exactly when `T(j̄) ≥ 0`, i.e. when
/// `2^{-Δ(j̄)} ≥ ε`; its members then satisfy `b·|m̄ ⊘ 2^{j̄}|₁ ≤ T(j̄)`.
pub fn level_threshold(params: &GridParams, level: &LevelIndex) -> Result<f64> {
    if level.dim() != params.dim {
        return Err(Error::DimensionMismatch { expected: params.dim, found: level.dim() });
    }
    Ok(-params.level_gap(level)? * math::LN_2 - math::ln(params.epsilon))
}

/// A built sparse grid: retained levels with their sorted member lists.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseGrid {
    params: GridParams,
    level_cap: u32,
    levels: BTreeMap<LevelIndex, Vec<TranslationIndex>>,
    total_points: u64,
}

impl SparseGrid {
    pub fn params(&self) -> &GridParams {
        &self.params
    }

    pub fn level_cap(&self) -> u32 {
        self.level_cap
    }

    pub fn total_points(&self) -> u64 {
        self.total_points
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Retained levels in lexicographic order with their sorted members.
    pub fn levels(&self) -> impl Iterator<Item = (&LevelIndex, &[TranslationIndex])> {
        self.levels.iter().map(|(j, m)| (j, m.as_slice()))
    }

    pub fn contains(&self, level: &LevelIndex, translation: &TranslationIndex) -> bool {
        match self.levels.get(level) {
            Some(members) => members.binary_search(translation).is_ok(),
            None => false,
        }
    }
}

/// Build the grid by scanning all levels with `|j̄|∞ ≤ level_cap`.
///
/// Fails loudly with [`Error::LevelCapTooSmall`] if any level *on* the cap
/// boundary still retains translations: beyond-cap levels could then be
/// nonempty and the enumeration would be silently incomplete. With an empty
/// boundary the scan is exhaustive for every functional shape in this crate,
/// since each is positively homogeneous, so emptiness propagates outward
/// along rays.
pub fn build_grid(params: &GridParams, level_cap: u32) -> Result<SparseGrid> {
    let dim = params.dim;
    let b = params.weight.rate();
    let mut levels = BTreeMap::new();
    let mut total_points: u64 = 0;
    let mut failure: Option<Error> = None;

    for_each_multi_index(dim, level_cap, &mut |j: &[u32]| {
        if failure.is_some() {
            return;
        }
        let level = LevelIndex::from_slice(j);
        let t = match level_threshold(params, &level) {
            Ok(t) => t,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        if t < 0.0 {
            return;
        }
        if level.linf() == level_cap {
            failure = Some(Error::LevelCapTooSmall { cap: level_cap });
            return;
        }
        let mut members = Vec::new();
        let scales: Vec<f64> = j.iter().map(|&ji| math::exp2(-f64::from(ji))).collect();
        let mut current = alloc::vec![0i64; dim];
        enumerate_members(b, t, &scales, 0, 0.0, &mut current, &mut members);
        if total_points + members.len() as u64 > MEMBER_LIMIT {
            failure = Some(Error::InvalidParameter(format!(
                "grid exceeds the supported size of {MEMBER_LIMIT} points; \
                 raise epsilon or the weight rate"
            )));
            return;
        }
        total_points += members.len() as u64;
        levels.insert(level, members);
    });

    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SparseGrid { params: params.clone(), level_cap, levels, total_points })
}

/// Recursive member enumeration in lexicographic order.
///
/// `partial` is `b` times the distance contributed by the axes already
/// fixed, accumulated left to right — the same arithmetic as the canonical
/// full test, which decides final acceptance on every emitted candidate.
fn enumerate_members(
    b: f64,
    t: f64,
    scales: &[f64],
    axis: usize,
    partial: f64,
    current: &mut Vec<i64>,
    out: &mut Vec<TranslationIndex>,
) {
    let remaining = t - partial;
    // Overshooting by one is harmless (the exact test rejects); missing a
    // member is not, hence the +1 guard on the floor.
    let bound = (math::floor(remaining / (b * scales[axis])) as i64 + 1).max(0);
    for m in -bound..=bound {
        let contribution = b * (m.unsigned_abs() as f64 * scales[axis]);
        let next = partial + contribution;
        if next > t {
            // ρ only grows along the remaining axes.
            if m >= 0 {
                break;
            }
            continue;
        }
        current[axis] = m;
        if axis + 1 == scales.len() {
            out.push(TranslationIndex::from_slice(current));
        } else {
            enumerate_members(b, t, scales, axis + 1, next, current, out);
        }
    }
}

/// Largest member coordinate along one axis: `max {a ≥ 0 : b·a·2^{-j} ≤ t}`,
/// resolved with the same comparison the member enumeration uses.
fn axis_reach(b: f64, t: f64, scale: f64) -> i64 {
    let mut a = (math::floor(t / (b * scale)) as i64).max(0);
    while b * ((a + 1) as f64 * scale) <= t {
        a += 1;
    }
    while a > 0 && b * (a as f64 * scale) > t {
        a -= 1;
    }
    a
}

/// The a-priori approximation error bound of a grid: the supremum over all
/// levels of the largest damping factor among *dropped* keys,
///
/// ```text
/// sup_{j̄} 2^{-Δ(j̄)} · exp(-b·r(j̄)),
/// ```
///
/// where `r(j̄)` is the smallest weighted distance of an excluded
/// translation (`0` for levels outside the grid — their nearest excluded
/// translation is `m̄ = 0` itself). For a retained level the excluded
/// distances form the lattice `2^{-max jᵢ}·ℕ` above `T/b`, so the minimum is
/// attained one step past the per-axis reach on some axis, and
/// `r(j̄) = minᵢ (Aᵢ+1)·2^{-jᵢ}` with `Aᵢ` the per-axis reach.
///
/// The scan runs over the grid's level box. Levels beyond the cap are
/// covered by the cap check in [`build_grid`]: the boundary shell is empty,
/// and by positive homogeneity every beyond-cap factor is dominated by a
/// boundary-shell factor already scanned.
///
/// By construction the bound is strictly below the grid's `ε` — retained
/// keys sit inside the threshold, excluded ones strictly past it. `p` is
/// accepted for interface compatibility with the general weighted estimate;
/// the bound for `w(x) = e^{b|x|₁}` does not depend on it.
pub fn error_bound(grid: &SparseGrid, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must lie in [1, inf]")));
    }
    let params = &grid.params;
    let b = params.weight.rate();
    let mut bound = 0.0f64;
    let mut failure: Option<Error> = None;
    for_each_multi_index(params.dim, grid.level_cap, &mut |j: &[u32]| {
        if failure.is_some() {
            return;
        }
        let level = LevelIndex::from_slice(j);
        let (gap, t) = match (params.level_gap(&level), level_threshold(params, &level)) {
            (Ok(gap), Ok(t)) => (gap, t),
            (Err(e), _) | (_, Err(e)) => {
                failure = Some(e);
                return;
            }
        };
        let term = if t < 0.0 {
            math::exp2(-gap)
        } else {
            let mut r = f64::INFINITY;
            for &ji in j {
                let scale = math::exp2(-f64::from(ji));
                let reach = axis_reach(b, t, scale);
                r = r.min((reach + 1) as f64 * scale);
            }
            math::exp2(-gap) * math::exp(-b * r)
        };
        bound = bound.max(term);
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(bound)
}

/// Restrict a coefficient field to the keys of a grid.
pub fn truncate(coeffs: &CoefficientField, grid: &SparseGrid) -> Result<CoefficientField> {
    if coeffs.dim() != grid.params.dim {
        return Err(Error::DimensionMismatch {
            expected: grid.params.dim,
            found: coeffs.dim(),
        });
    }
    let mut out = CoefficientField::new(coeffs.dim())?;
    for (level, translation, value) in coeffs.iter() {
        if grid.contains(level, translation) {
            out.insert(level.clone(), translation.clone(), value)?;
        }
    }
    Ok(out)
}

/// A grid point with its spatial centre.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCenter {
    /// Centre of the basis function support:
    /// `xᵢ = 2^{-j'ᵢ}·(mᵢ + γ/2)` at the effective per-axis scale `j'`.
    pub point: Vec<f64>,
    pub level: LevelIndex,
    pub translation: TranslationIndex,
}

/// Support centres of all grid keys, sorted by point (lexicographically,
/// coordinate by coordinate), with ties broken by level then translation —
/// distinct keys can share a centre when scaling and wavelet layers align.
pub fn grid_centers(grid: &SparseGrid, basis: &WaveletBasis) -> Vec<GridCenter> {
    let half_support = basis.support_length / 2.0;
    let mut centers: Vec<GridCenter> = Vec::with_capacity(grid.total_points as usize);
    for (level, members) in grid.levels() {
        let scales: Vec<f64> = level
            .as_slice()
            .iter()
            .map(|&j| math::exp2(-f64::from(j.saturating_sub(1))))
            .collect();
        for translation in members {
            let point: Vec<f64> = translation
                .as_slice()
                .iter()
                .zip(&scales)
                .map(|(&m, &scale)| scale * (m as f64 + half_support))
                .collect();
            centers.push(GridCenter {
                point,
                level: level.clone(),
                translation: translation.clone(),
            });
        }
    }
    centers.sort_by(|a, b| {
        let by_point = a
            .point
            .iter()
            .zip(&b.point)
            .map(|(x, y)| x.partial_cmp(y).expect("grid centres are finite"))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal);
        by_point
            .then_with(|| a.level.cmp(&b.level))
            .then_with(|| a.translation.cmp(&b.translation))
    });
    centers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::build_basis;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn l1(weights: &[f64]) -> IndexNorm {
        IndexNorm::weighted_l1(weights.to_vec()).unwrap()
    }

    fn worked_example_params() -> GridParams {
        GridParams::new(
            2,
            l1(&[0.0, 0.0]),
            l1(&[1.0, 1.0]),
            ExponentialWeight::new(1.0).unwrap(),
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn thresholds_match_hand_values() {
        let params = worked_example_params();
        // Δ((0,0)) = 0: T = -ln(1/2) = ln 2.
        let t00 = level_threshold(&params, &LevelIndex::from_slice(&[0, 0])).unwrap();
        assert_abs_diff_eq!(t00, core::f64::consts::LN_2, epsilon = 1e-15);
        // Δ((1,0)) = 1: T = -ln2 + ln2 = 0 exactly — the boundary tie the
        // construction must keep.
        let t10 = level_threshold(&params, &LevelIndex::from_slice(&[1, 0])).unwrap();
        assert_eq!(t10, 0.0);
        // Δ((1,1)) = 2: strictly negative.
        let t11 = level_threshold(&params, &LevelIndex::from_slice(&[1, 1])).unwrap();
        assert!(t11 < 0.0);
    }

    #[test]
    fn threshold_is_zero_at_unit_epsilon_and_zero_gap() {
        let params = GridParams::new(
            1,
            l1(&[0.0]),
            l1(&[0.0]),
            ExponentialWeight::new(2.0).unwrap(),
            1.0,
        )
        .unwrap();
        assert_eq!(level_threshold(&params, &LevelIndex::from_slice(&[0])).unwrap(), 0.0);
    }

    #[test]
    fn worked_example_grid_has_exactly_three_points() {
        let grid = build_grid(&worked_example_params(), 4).unwrap();
        assert_eq!(grid.total_points(), 3);
        assert_eq!(grid.num_levels(), 3);
        let origin = TranslationIndex::from_slice(&[0, 0]);
        for j in [[0u32, 0], [1, 0], [0, 1]] {
            let level = LevelIndex::from_slice(&j);
            assert!(grid.contains(&level, &origin), "missing level {j:?}");
            let members: Vec<_> = grid
                .levels()
                .find(|(l, _)| **l == level)
                .map(|(_, m)| m.to_vec())
                .unwrap();
            assert_eq!(members, vec![origin.clone()], "level {j:?}");
        }
    }

    #[test]
    fn worked_example_error_bound_is_exp_minus_one() {
        let grid = build_grid(&worked_example_params(), 4).unwrap();
        let bound = error_bound(&grid, 2.0).unwrap();
        assert_abs_diff_eq!(bound, math::exp(-1.0), epsilon = 1e-12);
        assert!(bound < grid.params().epsilon());
    }

    #[test]
    fn members_fill_the_weighted_ball() {
        // d = 1, δ₂ - δ₁ = 0 at level (2), b = 1, ε = e^{-1}: T = 1 and the
        // members are |m|/4 ≤ 1, i.e. m ∈ [-4, 4].
        let params = GridParams::new(
            1,
            l1(&[0.0]),
            IndexNorm::scaled_linf(0.0).unwrap(),
            ExponentialWeight::new(1.0).unwrap(),
            // Any ε < 1 keeps T finite; pick e^{-1} for a clean T = 1…
            math::exp(-1.0),
        )
        .unwrap();
        // …except Δ ≡ 0 keeps every level alive, so the cap check must trip.
        assert!(matches!(build_grid(&params, 3), Err(Error::LevelCapTooSmall { cap: 3 })));
    }

    #[test]
    fn member_enumeration_matches_the_ball_on_a_live_level() {
        let params = GridParams::new(
            1,
            l1(&[0.0]),
            l1(&[1.0]),
            ExponentialWeight::new(1.0).unwrap(),
            math::exp(-1.0) / 4.0, // T(j) = 1 + (1 - j)·ln2 … chosen so level 2 has T = 1 - ln2
        )
        .unwrap();
        // Level 2: T = -2ln2 - ln(e^{-1}/4) = -2ln2 + 1 + 2ln2 = 1.
        let t = level_threshold(&params, &LevelIndex::from_slice(&[2])).unwrap();
        assert_abs_diff_eq!(t, 1.0, epsilon = 1e-15);
        let grid = build_grid(&params, 8).unwrap();
        let members: Vec<i64> = grid
            .levels()
            .find(|(l, _)| l.as_slice() == [2])
            .map(|(_, m)| m.iter().map(|t| t.as_slice()[0]).collect())
            .unwrap();
        // |m|/4 ≤ 1 → m ∈ [-4, 4].
        assert_eq!(members, (-4..=4).collect::<Vec<_>>());
    }

    #[test]
    fn members_are_sorted_and_boundary_ties_are_kept() {
        let grid = build_grid(&worked_example_params(), 4).unwrap();
        for (_, members) in grid.levels() {
            let mut sorted = members.to_vec();
            sorted.sort();
            assert_eq!(members, sorted.as_slice());
        }
        // Level (1,0) has T = 0 exactly; m̄ = 0 is a tie (b·0 ≤ 0) and kept.
        assert!(grid.contains(
            &LevelIndex::from_slice(&[1, 0]),
            &TranslationIndex::from_slice(&[0, 0])
        ));
    }

    #[test]
    fn error_bound_stays_below_epsilon_for_empty_grids() {
        // ε > 1 never retains anything (2^{-Δ} ≤ 1 < ε), and the dropped
        // damping factors are all ≤ 1.
        let params = GridParams::new(
            2,
            l1(&[0.0, 0.0]),
            l1(&[1.0, 1.0]),
            ExponentialWeight::new(1.0).unwrap(),
            1.5,
        )
        .unwrap();
        let grid = build_grid(&params, 4).unwrap();
        assert_eq!(grid.total_points(), 0);
        let bound = error_bound(&grid, 1.0).unwrap();
        assert_eq!(bound, 1.0); // attained at j̄ = 0, the empty origin level
        assert!(bound < 1.5);
    }

    #[test]
    fn truncate_keeps_exactly_the_grid_keys() {
        let grid = build_grid(&worked_example_params(), 4).unwrap();
        let field = CoefficientField::from_entries(
            2,
            vec![
                (LevelIndex::from_slice(&[1, 0]), TranslationIndex::from_slice(&[0, 0]), 0.5),
                (LevelIndex::from_slice(&[1, 0]), TranslationIndex::from_slice(&[1, 0]), 0.25),
                (LevelIndex::from_slice(&[3, 3]), TranslationIndex::from_slice(&[0, 0]), 0.75),
            ],
        )
        .unwrap();
        let kept = truncate(&field, &grid).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(
            kept.get(
                &LevelIndex::from_slice(&[1, 0]),
                &TranslationIndex::from_slice(&[0, 0])
            ),
            Some(0.5)
        );
    }

    #[test]
    fn centers_are_offset_scaled_translations() {
        let basis = build_basis(2).unwrap(); // support length 3
        let grid = build_grid(&worked_example_params(), 4).unwrap();
        let centers = grid_centers(&grid, &basis);
        assert_eq!(centers.len(), 3);
        // All three keys have m̄ = 0 and effective scale 0 on every axis, so
        // every centre is (γ/2, γ/2) = (1.5, 1.5); ties break by level.
        for c in &centers {
            assert_eq!(c.point, vec![1.5, 1.5]);
        }
        let levels: Vec<_> = centers.iter().map(|c| c.level.as_slice().to_vec()).collect();
        assert_eq!(levels, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn params_validate_their_domain() {
        let w = ExponentialWeight::new(1.0).unwrap();
        assert!(GridParams::new(0, l1(&[0.0]), l1(&[1.0]), w, 0.5).is_err());
        assert!(GridParams::new(1, l1(&[0.0]), l1(&[1.0]), w, 0.0).is_err());
        assert!(GridParams::new(1, l1(&[0.0]), l1(&[1.0]), w, f64::NAN).is_err());
        assert!(
            GridParams::new(1, l1(&[0.0]), l1(&[1.0]), ExponentialWeight::unweighted(), 0.5)
                .is_err()
        );
        // Dominance violation: δ₁ > δ₂ somewhere.
        assert!(GridParams::new(1, l1(&[2.0]), l1(&[1.0]), w, 0.5).is_err());
        // Dimension mismatch between the functionals and the grid.
        assert!(GridParams::new(3, l1(&[0.0, 0.0]), l1(&[1.0, 1.0]), w, 0.5).is_err());
    }
}
