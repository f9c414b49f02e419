//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in this crate.
///
/// Variants are coarse on purpose: callers either branch on the class of
/// failure (bad input vs. numerical breakdown) or format the message.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An index or parameter vector had the wrong number of entries.
    DimensionMismatch { expected: usize, found: usize },
    /// A parameter violated its documented domain; the message names it.
    InvalidParameter(String),
    /// Requested filter family order outside the supported range `2..=10`.
    UnsupportedOrder(u32),
    /// The fixed-point iteration for the scaling-function values at the
    /// integers did not reach the requested residual within the iteration cap.
    CascadeDiverged { iterations: u32, residual: f64 },
    /// A numeric routine lost precision beyond its documented guarantee;
    /// the message names the routine and the observed residual.
    NumericalFailure(String),
    /// Quadrature resolution too coarse for the requested maximum level.
    Undersampled { quad_resolution: u32, required: u32 },
    /// The level scan hit its cap while levels were still being retained, so
    /// the enumeration (and any error bound derived from it) would be silently
    /// incomplete.
    LevelCapTooSmall { cap: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnsupportedOrder(n) => {
                write!(f, "unsupported filter order {n}: supported range is 2..=10")
            }
            Error::CascadeDiverged { iterations, residual } => write!(
                f,
                "scaling-function fixed point did not converge: residual {residual:.3e} \
                 after {iterations} iterations"
            ),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::Undersampled { quad_resolution, required } => write!(
                f,
                "quadrature resolution {quad_resolution} too coarse: \
                 need at least {required} for the requested maximum level"
            ),
            Error::LevelCapTooSmall { cap } => write!(
                f,
                "level cap {cap} too small: levels on the cap boundary still \
                 retain grid points, so the level scan is incomplete"
            ),
        }
    }
}

impl core::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
