//! Coefficient analysis by dyadically aligned tensor quadrature, and
//! pointwise synthesis.
//!
//! Analysis computes `λ_{j̄,m̄} = ∫ f(x)·Ψ_{j̄,m̄}(x) dx` for every key whose
//! support meets the analysis box `[-R, R]^d`, using the composite trapezoid
//! rule at per-axis step `2^{-qr}`. Two structural facts make this exact to
//! work with and cheap to run:
//!
//! * every quadrature node is a dyadic point, so the wavelet factors come
//!   straight out of the [`DyadicTable`](crate::wavelet::DyadicTable) with no
//!   interpolation, and the factor values along an axis do not depend on the
//!   translation `mᵢ` — only their *position* shifts;
//! * the supports of neighbouring keys overlap heavily, so `f` is sampled
//!   once on the global grid `2^{-qr}ℤ^d` covering `[-R-γ, R+γ]^d`
//!   ([`sample_function`]) and every coefficient integrates against that
//!   shared [`SampleGrid`]. The per-sample cost of a coefficient is then a
//!   handful of multiplies, independent of how expensive `f` itself is.
//!
//! The split into [`sample_function`] + [`analysis_keys`] + [`coefficient`]
//! is public: [`analyze`] chains them sequentially, and callers that want to
//! spread coefficients across threads can do the same chaining themselves —
//! each coefficient is a pure function of the shared samples, so any
//! schedule produces bitwise identical values.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::{for_each_multi_index, LevelIndex, TranslationIndex};
use crate::math;
use crate::wavelet::field::CoefficientField;
use crate::wavelet::filters::WaveletBasis;
use crate::wavelet::table::{effective_scale, DyadicTable};
use crate::COEFFICIENT_PRUNE_THRESHOLD;

/// Hard cap on the number of stored samples (`512 MiB` of `f64`): the global
/// sample grid is meant for moderate dimensions and radii, and exceeding the
/// cap is reported as an error rather than silently thrashing.
const SAMPLE_LIMIT: usize = 1 << 26;

/// Values of a function on the dyadic grid `2^{-r}ℤ^d ∩ [-radius, radius]^d`
/// (box enlarged outward to the enclosing grid points), stored row-major
/// with the last axis contiguous.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    dim: usize,
    resolution: u32,
    lo: Vec<i64>,
    counts: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<f64>,
}

impl SampleGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Per-axis index range `[lo, lo + count)`; point `t` sits at `t·2^{-r}`.
    pub fn axis_range(&self, axis: usize) -> (i64, usize) {
        (self.lo[axis], self.counts[axis])
    }

    /// Value at the lattice point `t̄·2^{-r}`, or `None` outside the box.
    pub fn lattice_value(&self, t: &[i64]) -> Option<f64> {
        if t.len() != self.dim {
            return None;
        }
        let mut flat = 0usize;
        let axes = t.iter().zip(&self.lo).zip(self.counts.iter().zip(&self.strides));
        for ((&ti, &lo), (&count, &stride)) in axes {
            let rel = ti - lo;
            if rel < 0 || rel as usize >= count {
                return None;
            }
            flat += rel as usize * stride;
        }
        Some(self.data[flat])
    }

    fn empty(dim: usize, radius: f64, resolution: u32) -> Result<SampleGrid> {
        if dim == 0 {
            return Err(Error::InvalidParameter("sample dimension must be at least 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "sample radius {radius} must be finite and positive"
            )));
        }
        let scale = math::exp2(f64::from(resolution));
        let lo_1d = math::floor(-radius * scale) as i64;
        let hi_1d = math::ceil(radius * scale) as i64;
        let count_1d = (hi_1d - lo_1d + 1) as usize;

        let mut total: usize = 1;
        for _ in 0..dim {
            total = total
                .checked_mul(count_1d)
                .filter(|&t| t <= SAMPLE_LIMIT)
                .ok_or_else(|| {
                    Error::InvalidParameter(alloc::format!(
                        "sample grid of {count_1d}^{dim} points exceeds the supported size; \
                         reduce the radius or the resolution"
                    ))
                })?;
        }

        let lo = vec![lo_1d; dim];
        let counts = vec![count_1d; dim];
        let mut strides = vec![1usize; dim];
        for axis in (0..dim.saturating_sub(1)).rev() {
            strides[axis] = strides[axis + 1] * counts[axis + 1];
        }
        Ok(SampleGrid { dim, resolution, lo, counts, strides, data: vec![0.0; total] })
    }
}

/// Sample `f` on the dyadic grid of step `2^{-resolution}` covering
/// `[-radius, radius]^d`.
///
/// Every sample must be finite; a NaN or infinity from `f` is reported as
/// [`Error::NumericalFailure`] naming the offending point.
pub fn sample_function<F: Fn(&[f64]) -> f64>(
    f: &F,
    dim: usize,
    radius: f64,
    resolution: u32,
) -> Result<SampleGrid> {
    let mut grid = SampleGrid::empty(dim, radius, resolution)?;
    let lo_1d = grid.lo[0];
    let counts = grid.counts.clone();

    let step = math::exp2(-f64::from(resolution));
    let mut x = vec![0.0; dim];
    let mut idx = vec![0usize; dim];
    for slot in grid.data.iter_mut() {
        for axis in 0..dim {
            x[axis] = (lo_1d + idx[axis] as i64) as f64 * step;
        }
        let value = f(&x);
        if !value.is_finite() {
            return Err(Error::NumericalFailure(alloc::format!(
                "function value at {x:?} is not finite"
            )));
        }
        *slot = value;
        // Odometer increment, last axis fastest (matches row-major layout).
        for axis in (0..dim).rev() {
            idx[axis] += 1;
            if idx[axis] < counts[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }

    Ok(grid)
}

/// All keys `(j̄, m̄)` with `|j̄|∞ ≤ max_level` whose support intersects
/// `[-R, R]^d`, in canonical (level, translation) order.
///
/// Along axis `i` at effective scale `j'`, the factor is supported on
/// `[2^{-j'}mᵢ, 2^{-j'}(mᵢ+γ)]`, which meets `[-R, R]` exactly for
/// `mᵢ ∈ [-⌊R·2^{j'}⌋ - γ, ⌊R·2^{j'}⌋]`.
pub fn analysis_keys(
    basis: &WaveletBasis,
    dim: usize,
    max_level: u32,
    domain_radius: f64,
) -> Vec<(LevelIndex, TranslationIndex)> {
    let gamma = basis.support_length as i64;
    let mut keys = Vec::new();
    for_each_multi_index(dim, max_level, &mut |j: &[u32]| {
        let level = LevelIndex::from_slice(j);
        let ranges: Vec<(i64, i64)> = j
            .iter()
            .map(|&ji| {
                let scale = math::exp2(f64::from(effective_scale(ji)));
                let reach = math::floor(domain_radius * scale) as i64;
                (-reach - gamma, reach)
            })
            .collect();
        let mut m = vec![0i64; dim];
        for axis in 0..dim {
            m[axis] = ranges[axis].0;
        }
        loop {
            keys.push((level.clone(), TranslationIndex::new(m.clone())));
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                if m[axis] < ranges[axis].1 {
                    m[axis] += 1;
                    break;
                }
                m[axis] = ranges[axis].0;
            }
        }
    });
    keys
}

/// One analysis coefficient `∫ f·Ψ_{j̄,m̄}` from shared samples, by the
/// composite trapezoid rule at step `2^{-r}` where `r` is the sample grid
/// resolution.
///
/// The support of the key must be covered by the sample grid, the grid must
/// resolve the finest axis scale by a factor of at least 4 (`r ≥ j' + 2`),
/// and the table must be at least as fine as the sample grid.
pub fn coefficient(
    samples: &SampleGrid,
    table: &DyadicTable,
    level: &LevelIndex,
    translation: &TranslationIndex,
) -> Result<f64> {
    let dim = samples.dim;
    if level.dim() != dim || translation.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if level.dim() != dim { level.dim() } else { translation.dim() },
        });
    }
    let qr = samples.resolution;
    if table.resolution() < qr {
        return Err(Error::InvalidParameter(alloc::format!(
            "table resolution {} is coarser than the sample grid resolution {qr}",
            table.resolution()
        )));
    }
    let gamma = table.basis().support_length as i64;

    // Per-axis factor values (wavelet factor × trapezoid weight × step).
    // The factor along axis i at translation m is a pure index shift of the
    // factor at translation 0, so the array is built once per axis.
    let mut axis_factors: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut starts: Vec<i64> = Vec::with_capacity(dim);
    for axis in 0..dim {
        let stored = level.as_slice()[axis];
        let scale = effective_scale(stored);
        if qr < scale + 2 {
            return Err(Error::Undersampled { quad_resolution: qr, required: scale + 2 });
        }
        let upsample = qr - scale; // support spans γ·2^{upsample} steps
        let npoints = (gamma << upsample) as usize + 1;
        let table_stride = 1i64 << (table.resolution() - upsample);
        let amp = math::exp2(f64::from(scale) / 2.0); // 2^{j'/2}
        let h = math::exp2(-f64::from(qr));
        let mut factors = Vec::with_capacity(npoints);
        for t in 0..npoints {
            let raw = if stored == 0 {
                table.phi_at_index(t as i64 * table_stride)
            } else {
                table.psi_at_index(t as i64 * table_stride)
            };
            let w = if t == 0 || t == npoints - 1 { 0.5 } else { 1.0 };
            factors.push(raw * amp * w * h);
        }
        axis_factors.push(factors);

        let m = translation.as_slice()[axis];
        let start = m << upsample; // global grid index of the support start
        let (lo, count) = samples.axis_range(axis);
        if start < lo || start + (gamma << upsample) >= lo + count as i64 {
            return Err(Error::InvalidParameter(alloc::format!(
                "sample grid does not cover the support of level {:?}, translation {:?}",
                level,
                translation
            )));
        }
        starts.push(start);
    }

    let value = tensor_sum(samples, &axis_factors, &starts, 0, 0);
    if !value.is_finite() {
        return Err(Error::NumericalFailure(alloc::format!(
            "coefficient at {:?}/{:?} is not finite",
            level,
            translation
        )));
    }
    Ok(value)
}

/// Nested trapezoid sum `Σ_{t̄} f(t̄) Πᵢ Bᵢ(tᵢ)` over the support box,
/// recursing over axes with the last axis as the contiguous inner loop.
fn tensor_sum(
    samples: &SampleGrid,
    axis_factors: &[Vec<f64>],
    starts: &[i64],
    axis: usize,
    flat_base: usize,
) -> f64 {
    let offset = (starts[axis] - samples.lo[axis]) as usize;
    let base = flat_base + offset * samples.strides[axis];
    let factors = &axis_factors[axis];
    if axis + 1 == samples.dim {
        let row = &samples.data[base..base + factors.len()];
        let mut acc = 0.0;
        for (b, v) in factors.iter().zip(row) {
            acc += b * v;
        }
        acc
    } else {
        let stride = samples.strides[axis];
        let mut acc = 0.0;
        for (t, b) in factors.iter().enumerate() {
            if *b != 0.0 {
                acc += b * tensor_sum(samples, axis_factors, starts, axis + 1, base + t * stride);
            }
        }
        acc
    }
}

/// Analyse `f` against every key with `|j̄|∞ ≤ max_level` whose support
/// meets `[-R, R]^d`, by trapezoid quadrature at per-axis step
/// `2^{-quad_resolution}`.
///
/// Requires `quad_resolution ≥ max_level + 2` (at least four quadrature
/// steps across the finest wavelet scale — anything less cannot see the
/// oscillation it is integrating) and a table at least as fine as the
/// quadrature. Coefficients below the prune threshold are dropped. The
/// result is deterministic: keys are processed in canonical order and each
/// coefficient is a fixed-order reduction.
pub fn analyze<F: Fn(&[f64]) -> f64>(
    f: &F,
    table: &DyadicTable,
    dim: usize,
    max_level: u32,
    domain_radius: f64,
    quad_resolution: u32,
) -> Result<CoefficientField> {
    if dim == 0 {
        return Err(Error::InvalidParameter("analysis dimension must be at least 1".into()));
    }
    if !(domain_radius > 0.0 && domain_radius.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "domain radius {domain_radius} must be finite and positive"
        )));
    }
    if quad_resolution < max_level + 2 {
        return Err(Error::Undersampled {
            quad_resolution,
            required: max_level + 2,
        });
    }
    let samples = sample_function(
        f,
        dim,
        domain_radius + table.basis().support_length,
        quad_resolution,
    )?;
    let mut field = CoefficientField::new(dim)?;
    for (level, translation) in analysis_keys(table.basis(), dim, max_level, domain_radius) {
        let value = coefficient(&samples, table, &level, &translation)?;
        if value.abs() >= COEFFICIENT_PRUNE_THRESHOLD {
            field.insert(level, translation, value)?;
        }
    }
    Ok(field)
}

/// Evaluate `Σ λ_{j̄,m̄} Ψ_{j̄,m̄}` on the whole dyadic lattice
/// `2^{-resolution}ℤ^d ∩ [-radius, radius]^d` in a single pass.
///
/// This is the bulk counterpart of [`reconstruct`]: instead of gathering the
/// keys around one point, each key scatters its separable factor block onto
/// the lattice once, at cost proportional to its own support volume. For a
/// dense evaluation box this is cheaper than pointwise reconstruction by a
/// factor of the per-point candidate window, and it produces exactly the
/// same dyadic table reads. Supports reaching past the box are clipped.
///
/// Requires a table at least as fine as the lattice. Deterministic: keys
/// scatter in canonical order, each over a fixed index range.
pub fn synthesize(
    coeffs: &CoefficientField,
    table: &DyadicTable,
    radius: f64,
    resolution: u32,
) -> Result<SampleGrid> {
    if table.resolution() < resolution {
        return Err(Error::InvalidParameter(alloc::format!(
            "table resolution {} is coarser than the synthesis resolution {resolution}",
            table.resolution()
        )));
    }
    let dim = coeffs.dim();
    let mut grid = SampleGrid::empty(dim, radius, resolution)?;
    let gamma = table.basis().support_length as i64;

    let mut ranges: Vec<(i64, i64)> = vec![(0, 0); dim];
    let mut factors: Vec<Vec<f64>> = vec![Vec::new(); dim];
    for (level, entries) in coeffs.levels() {
        let scales: Vec<u32> =
            level.as_slice().iter().map(|&j| effective_scale(j)).collect();
        let amp = math::exp2(scales.iter().map(|&s| f64::from(s)).sum::<f64>() / 2.0);
        'entry: for (translation, &lambda) in entries {
            for axis in 0..dim {
                let scale = scales[axis];
                let m = translation.as_slice()[axis];
                // Lattice points g with g·2^{-res} inside the support
                // [m·2^{-j'}, (m+γ)·2^{-j'}], clipped to the stored box.
                let (mut g_lo, mut g_hi) = if resolution >= scale {
                    let e = resolution - scale;
                    (m << e, (m + gamma) << e)
                } else {
                    let d = 1i64 << (scale - resolution);
                    let lo = m.div_euclid(d) + i64::from(m.rem_euclid(d) != 0);
                    (lo, (m + gamma).div_euclid(d))
                };
                let (lo, count) = grid.axis_range(axis);
                g_lo = g_lo.max(lo);
                g_hi = g_hi.min(lo + count as i64 - 1);
                if g_lo > g_hi {
                    continue 'entry;
                }
                ranges[axis] = (g_lo, g_hi);

                // Table index of the factor at lattice point g is an exact
                // integer: (2^{j'}·g·2^{-res} - m)·2^{r}.
                let stride = 1i64 << (table.resolution() + scale - resolution);
                let base = (g_lo << (table.resolution() + scale - resolution))
                    - (m << table.resolution());
                let stored = level.as_slice()[axis];
                let axis_factors = &mut factors[axis];
                axis_factors.clear();
                for t in 0..=(g_hi - g_lo) {
                    let idx = base + t * stride;
                    axis_factors.push(if stored == 0 {
                        table.phi_at_index(idx)
                    } else {
                        table.psi_at_index(idx)
                    });
                }
            }
            scatter(&mut grid, &factors[..], &ranges, 0, 0, lambda * amp);
        }
    }
    Ok(grid)
}

/// Rank-1 scatter `grid += c·Πᵢ Bᵢ` over the per-axis index ranges, with the
/// last axis as the contiguous inner loop.
fn scatter(
    grid: &mut SampleGrid,
    factors: &[Vec<f64>],
    ranges: &[(i64, i64)],
    axis: usize,
    flat_base: usize,
    weight: f64,
) {
    let offset = (ranges[axis].0 - grid.lo[axis]) as usize;
    let base = flat_base + offset * grid.strides[axis];
    if axis + 1 == grid.dim {
        let row = &mut grid.data[base..base + factors[axis].len()];
        for (slot, b) in row.iter_mut().zip(&factors[axis]) {
            *slot += weight * b;
        }
    } else {
        let stride = grid.strides[axis];
        for t in 0..factors[axis].len() {
            let b = factors[axis][t];
            if b != 0.0 {
                scatter(grid, factors, ranges, axis + 1, base + t * stride, weight * b);
            }
        }
    }
}

/// Evaluate `Σ λ_{j̄,m̄} Ψ_{j̄,m̄}(x)` at a point.
///
/// Per level, only keys whose support can contain `x` are touched: when the
/// level stores fewer entries than the `(γ+1)^d` candidate translations
/// containing `x`, the stored entries are scanned with a cheap range check;
/// otherwise the candidate window is probed by keyed lookup. Either way the
/// work per level is `min(#entries, (γ+1)^d)` table evaluations at most.
pub fn reconstruct(coeffs: &CoefficientField, table: &DyadicTable, x: &[f64]) -> Result<f64> {
    let dim = coeffs.dim();
    if x.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: x.len() });
    }
    let gamma = table.basis().support_length; // as f64
    let gamma_i = gamma as i64;
    let table_scale = math::exp2(f64::from(table.resolution()));

    let mut acc = 0.0;
    let mut y = vec![0.0; dim];
    let mut window_lo = vec![0i64; dim];
    let mut candidate = vec![0i64; dim];
    for (level, entries) in coeffs.levels() {
        // Per-axis rescaled coordinate and overall amplitude 2^{Σ j'ᵢ / 2}.
        let mut scale_sum = 0u32;
        for axis in 0..dim {
            let scale = effective_scale(level.as_slice()[axis]);
            scale_sum += scale;
            y[axis] = math::exp2(f64::from(scale)) * x[axis];
        }
        let amp = math::exp2(f64::from(scale_sum) / 2.0);

        // Candidate translations along axis i: mᵢ ∈ [⌈yᵢ⌉ - γ, ⌊yᵢ⌋].
        let mut window = 1usize;
        for axis in 0..dim {
            window_lo[axis] = math::ceil(y[axis]) as i64 - gamma_i;
            let hi = math::floor(y[axis]) as i64;
            window = window.saturating_mul((hi - window_lo[axis] + 1).max(0) as usize);
        }

        let mut level_acc = 0.0;
        if entries.len() <= window {
            'entry: for (m, &lambda) in entries {
                let ms = m.as_slice();
                for axis in 0..dim {
                    let rel = y[axis] - ms[axis] as f64;
                    if !(0.0..=gamma).contains(&rel) {
                        continue 'entry;
                    }
                }
                level_acc += lambda * factor_product(table, level, ms, &y, table_scale);
            }
        } else {
            // Odometer over the candidate window, keyed lookups only.
            let mut axis_extents = vec![0i64; dim];
            for axis in 0..dim {
                axis_extents[axis] = math::floor(y[axis]) as i64 - window_lo[axis];
            }
            if axis_extents.iter().all(|&e| e >= 0) {
                candidate.copy_from_slice(&window_lo);
                'window: loop {
                    if let Some(&lambda) = entries.get(candidate.as_slice()) {
                        level_acc +=
                            lambda * factor_product(table, level, &candidate, &y, table_scale);
                    }
                    let mut axis = dim;
                    loop {
                        if axis == 0 {
                            break 'window;
                        }
                        axis -= 1;
                        if candidate[axis] < window_lo[axis] + axis_extents[axis] {
                            candidate[axis] += 1;
                            break;
                        }
                        candidate[axis] = window_lo[axis];
                    }
                }
            }
        }
        acc += amp * level_acc;
    }
    Ok(acc)
}

/// Product of raw table factor values `Πᵢ (φ or ψ)(yᵢ - mᵢ)` — amplitude
/// `2^{j'/2}` is applied once per level by the caller.
fn factor_product(
    table: &DyadicTable,
    level: &LevelIndex,
    m: &[i64],
    y: &[f64],
    table_scale: f64,
) -> f64 {
    let mut product = 1.0;
    for axis in 0..level.dim() {
        let rel = y[axis] - m[axis] as f64;
        let idx = math::round(rel * table_scale) as i64;
        let raw = if level.as_slice()[axis] == 0 {
            table.phi_at_index(idx)
        } else {
            table.psi_at_index(idx)
        };
        product *= raw;
    }
    product
}
