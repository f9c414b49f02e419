//! On-disk formats: coefficient files, grid JSON, centers CSV, and the
//! approximation report.
//!
//! Every writer iterates collections in their canonical order and prints
//! floats with the shortest round-trip representation, so a fixed input
//! produces byte-identical output across runs and machines.

use serde::{Deserialize, Serialize};

use besovgrid_core::{CoefficientField, GridCenter, LevelIndex, SparseGrid, TranslationIndex};

use crate::config::NormSpec;
use crate::CliError;

/// One coefficient file entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub j: Vec<u32>,
    pub m: Vec<i64>,
    pub lambda: f64,
}

/// Read a coefficient field from a JSON array of entries.
///
/// Entries may arrive in any order; duplicates resolve last-wins, matching
/// in-memory insertion semantics. Every entry must match the configured
/// dimension `dim`; an empty file yields the empty field.
pub fn read_coefficients(path: &std::path::Path, dim: usize) -> Result<CoefficientField, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let entries: Vec<CoeffEntry> = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid coefficient file {}: {e}", path.display())))?;
    let field = CoefficientField::from_entries(
        dim,
        entries.into_iter().map(|e| {
            (LevelIndex::new(e.j), TranslationIndex::new(e.m), e.lambda)
        }),
    )?;
    Ok(field)
}

/// Serialize a coefficient field as a canonical-order JSON array.
pub fn coefficients_to_json(field: &CoefficientField) -> String {
    let entries: Vec<CoeffEntry> = field
        .iter()
        .map(|(j, m, lambda)| CoeffEntry {
            j: j.as_slice().to_vec(),
            m: m.as_slice().to_vec(),
            lambda,
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("plain data serializes")
}

/// Grid file: parameters, per-level members, and the total count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub params: GridParamsFile,
    pub levels: Vec<GridLevelFile>,
    pub total_points: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridParamsFile {
    pub dim: usize,
    pub delta1: NormSpec,
    pub delta2: NormSpec,
    pub epsilon: f64,
    pub b_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridLevelFile {
    pub j: Vec<u32>,
    pub members: Vec<Vec<i64>>,
}

pub fn grid_to_json(grid: &SparseGrid) -> String {
    let params = grid.params();
    let file = GridFile {
        params: GridParamsFile {
            dim: params.dim(),
            delta1: NormSpec::from_norm(params.delta1()),
            delta2: NormSpec::from_norm(params.delta2()),
            epsilon: params.epsilon(),
            b_w: params.weight().rate(),
        },
        levels: grid
            .levels()
            .map(|(j, members)| GridLevelFile {
                j: j.as_slice().to_vec(),
                members: members.iter().map(|m| m.as_slice().to_vec()).collect(),
            })
            .collect(),
        total_points: grid.total_points(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Centers CSV: `x1,...,xd,j1,...,jd,m1,...,md`, one row per grid point,
/// rows in lexicographic point order.
pub fn centers_to_csv(centers: &[GridCenter], dim: usize) -> String {
    let mut out = String::new();
    for axis in 1..=dim {
        out.push_str(&format!("x{axis},"));
    }
    for axis in 1..=dim {
        out.push_str(&format!("j{axis},"));
    }
    for axis in 1..=dim {
        out.push_str(&format!("m{axis}"));
        if axis < dim {
            out.push(',');
        }
    }
    out.push('\n');
    for center in centers {
        for value in &center.point {
            out.push_str(&format!("{value},"));
        }
        for j in center.level.as_slice() {
            out.push_str(&format!("{j},"));
        }
        let ms = center.translation.as_slice();
        for (axis, m) in ms.iter().enumerate() {
            out.push_str(&format!("{m}"));
            if axis + 1 < ms.len() {
                out.push(',');
            }
        }
        out.push('\n');
    }
    out
}

/// Approximation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub grid: GridSummary,
    pub a_priori_bound: f64,
    pub quasinorm_full: f64,
    pub quasinorm_truncated: f64,
    /// The right-hand side of the error estimate: bound × full quasinorm.
    pub bound_times_quasinorm: f64,
    pub measured_lpw_error: f64,
    pub measurement: MeasurementInfo,
    /// Wall-clock seconds; informational only and excluded from any
    /// byte-stability comparison.
    pub timing_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub total_points: u64,
    pub levels_retained: usize,
    pub level_cap: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementInfo {
    pub box_radius: f64,
    pub lattice_resolution: u32,
    pub samples_per_axis: u32,
}
