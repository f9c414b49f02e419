//! Sparse coefficient fields keyed by (level, translation).

use alloc::collections::BTreeMap;
use alloc::format;
use core::borrow::Borrow;

use crate::error::{Error, Result};
use crate::index::{LevelIndex, TranslationIndex};
use crate::COEFFICIENT_PRUNE_THRESHOLD;

impl Borrow<[i64]> for TranslationIndex {
    fn borrow(&self) -> &[i64] {
        self.as_slice()
    }
}

/// A finitely supported map `(j̄, m̄) ↦ λ_{j̄,m̄}`.
///
/// Entries are held in ordered maps (levels outer, translations inner), so
/// every iteration — and hence every reduction computed over a field — runs
/// in one canonical order. Coefficients with `|λ|` below
/// [`COEFFICIENT_PRUNE_THRESHOLD`](crate::COEFFICIENT_PRUNE_THRESHOLD) are
/// dropped on insertion: at the working resolutions they are quadrature
/// noise, and keeping them would let noise influence ordered output.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    dim: usize,
    levels: BTreeMap<LevelIndex, BTreeMap<TranslationIndex, f64>>,
    len: usize,
}

impl CoefficientField {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("field dimension must be at least 1".into()));
        }
        Ok(CoefficientField { dim, levels: BTreeMap::new(), len: 0 })
    }

    /// Build from an entry list (any order); duplicate keys keep the last
    /// value, mirroring repeated [`insert`](Self::insert) calls.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LevelIndex, TranslationIndex, f64)>,
    {
        let mut field = CoefficientField::new(dim)?;
        for (level, translation, value) in entries {
            field.insert(level, translation, value)?;
        }
        Ok(field)
    }

    /// Insert `λ_{j̄,m̄}`, replacing any previous value at that key.
    ///
    /// Values with `|λ|` below the prune threshold *remove* the key instead:
    /// the field never stores entries indistinguishable from zero.
    pub fn insert(&mut self, level: LevelIndex, translation: TranslationIndex, value: f64) -> Result<()> {
        if level.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: level.dim() });
        }
        if translation.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: translation.dim() });
        }
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coefficient at {:?}/{:?} is not finite",
                level, translation
            )));
        }
        if value.abs() < COEFFICIENT_PRUNE_THRESHOLD {
            self.remove(&level, &translation);
            return Ok(());
        }
        let slot = self.levels.entry(level).or_default();
        if slot.insert(translation, value).is_none() {
            self.len += 1;
        }
        Ok(())
    }

    fn remove(&mut self, level: &LevelIndex, translation: &TranslationIndex) {
        if let Some(slot) = self.levels.get_mut(level) {
            if slot.remove(translation).is_some() {
                self.len -= 1;
            }
            if slot.is_empty() {
                self.levels.remove(level);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, level: &LevelIndex, translation: &TranslationIndex) -> Option<f64> {
        self.levels.get(level)?.get(translation).copied()
    }

    /// Levels in lexicographic order with their translation maps.
    pub fn levels(&self) -> impl Iterator<Item = (&LevelIndex, &BTreeMap<TranslationIndex, f64>)> {
        self.levels.iter()
    }

    /// All entries in canonical (level, translation) order.
    pub fn iter(&self) -> impl Iterator<Item = (&LevelIndex, &TranslationIndex, f64)> {
        self.levels
            .iter()
            .flat_map(|(level, slot)| slot.iter().map(move |(m, &v)| (level, m, v)))
    }
}
