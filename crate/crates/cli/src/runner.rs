//! Command orchestration: worker-chunked analysis, grid construction with an
//! automatic level cap, and the three subcommand pipelines.

use std::time::Instant;

use besovgrid_core::{
    analysis_keys, analyze, build_basis, build_grid, coefficient, error_bound, grid_centers,
    lpw_error, sample_function, sequence_quasinorm, synthesize, tabulate, truncate, BesovParams,
    CoefficientField, DyadicTable, Error, ExponentialWeight, GridParams, SparseGrid,
    COEFFICIENT_PRUNE_THRESHOLD,
};

use crate::config::RunConfig;
use crate::formats::{
    centers_to_csv, coefficients_to_json, grid_to_json, read_coefficients, ApproxReport,
    GridSummary, MeasurementInfo,
};
use crate::functions::{apply_overrides, resolve, TestFunction};
use crate::CliError;

/// Largest level cap the automatic search will try before concluding the
/// grid never closes (e.g. `delta2 = delta1`, which keeps every level).
const MAX_AUTO_CAP: u32 = 64;

/// Smallest tabulation resolution used for evaluation tables; finer
/// quadrature raises it so the table always resolves the quadrature grid.
const BASE_TABLE_RESOLUTION: u32 = 12;

/// Number of analysis workers: `BESOVGRID_WORKERS` when set, otherwise the
/// machine's available parallelism.
pub fn worker_count() -> Result<usize, CliError> {
    match std::env::var("BESOVGRID_WORKERS") {
        Ok(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|&n| (1..=256).contains(&n))
            .ok_or_else(|| {
                CliError::config(format!(
                    "BESOVGRID_WORKERS must be an integer in 1..=256, got \"{raw}\""
                ))
            }),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Analysis across `workers` threads over disjoint contiguous key chunks.
///
/// Every coefficient is a pure function of the shared sample grid, so the
/// merged field is bitwise identical for every worker count; chunks are
/// merged in key order.
pub fn analyze_with_workers(
    f: &TestFunction,
    table: &DyadicTable,
    dim: usize,
    max_level: u32,
    domain_radius: f64,
    quad_resolution: u32,
    workers: usize,
) -> Result<CoefficientField, Error> {
    if workers <= 1 || dim == 0 {
        return analyze(f, table, dim, max_level, domain_radius, quad_resolution);
    }
    if quad_resolution < max_level + 2 {
        return Err(Error::Undersampled { quad_resolution, required: max_level + 2 });
    }
    let samples = sample_function(
        f,
        dim,
        domain_radius + table.basis().support_length,
        quad_resolution,
    )?;
    let keys = analysis_keys(table.basis(), dim, max_level, domain_radius);
    let chunk_size = keys.len().div_ceil(workers).max(1);

    let mut results: Vec<Result<Vec<f64>, Error>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = keys
            .chunks(chunk_size)
            .map(|chunk| {
                let samples = &samples;
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|(level, translation)| coefficient(samples, table, level, translation))
                        .collect()
                })
            })
            .collect();
        for handle in handles {
            results.push(handle.join().expect("analysis worker panicked"));
        }
    });

    let mut field = CoefficientField::new(dim)?;
    let mut key_iter = keys.iter();
    for chunk in results {
        for value in chunk? {
            let (level, translation) = key_iter.next().expect("one value per key");
            if value.abs() >= COEFFICIENT_PRUNE_THRESHOLD {
                field.insert(level.clone(), translation.clone(), value)?;
            }
        }
    }
    Ok(field)
}

/// Build the grid with the smallest level cap whose boundary shell is empty.
pub fn build_grid_auto(params: &GridParams) -> Result<(SparseGrid, u32), CliError> {
    for cap in 0..=MAX_AUTO_CAP {
        match build_grid(params, cap) {
            Ok(grid) => return Ok((grid, cap)),
            Err(Error::LevelCapTooSmall { .. }) => continue,
            Err(other) => return Err(other.into()),
        }
    }
    Err(CliError::config(format!(
        "grid still retains levels at the maximum cap {MAX_AUTO_CAP}; \
         delta2 - delta1 must grow along every axis direction"
    )))
}

fn grid_params(config: &RunConfig) -> Result<GridParams, CliError> {
    Ok(GridParams::new(
        config.dim,
        config.delta1.to_norm()?,
        config.delta2.to_norm()?,
        ExponentialWeight::new(config.b_w)?,
        config.epsilon,
    )?)
}

/// `grid` subcommand: sparse grid → (centers CSV, grid JSON).
pub fn run_grid(config: &RunConfig) -> Result<(String, String), CliError> {
    let basis = build_basis(config.basis_order)?;
    let params = grid_params(config)?;
    let (grid, _cap) = build_grid_auto(&params)?;
    let centers = grid_centers(&grid, &basis);
    Ok((centers_to_csv(&centers, config.dim), grid_to_json(&grid)))
}

/// `approx` subcommand: analyze → grid → truncate → synthesize → measure.
pub fn run_approx(
    config: &RunConfig,
    function_override: Option<&str>,
    param_overrides: &[String],
) -> Result<(ApproxReport, CoefficientField), CliError> {
    let start = Instant::now();
    let basis = build_basis(config.basis_order)?;
    let table_resolution = config.quad_resolution.max(BASE_TABLE_RESOLUTION);
    let table = tabulate(&basis, table_resolution)?;
    let spec = apply_overrides(&config.test_function, function_override, param_overrides)?;
    let f = resolve(&spec, config.dim, &table)?;

    let workers = worker_count()?;
    let full = analyze_with_workers(
        &f,
        &table,
        config.dim,
        config.max_level,
        config.domain_radius,
        config.quad_resolution,
        workers,
    )?;

    let weight = ExponentialWeight::new(config.b_w)?;
    let besov = BesovParams::new(
        config.p.0,
        config.q.0,
        config.delta2.to_norm()?,
        weight,
        basis.vanishing_moments,
    )?;
    let quasinorm_full = sequence_quasinorm(&full, &besov)?;

    let params = grid_params(config)?;
    let (grid, level_cap) = build_grid_auto(&params)?;
    let a_priori_bound = error_bound(&grid, config.p.0)?;
    let kept = truncate(&full, &grid)?;
    let quasinorm_truncated = sequence_quasinorm(&kept, &besov)?;

    // Measure on a dyadic lattice over an integer box that contains every
    // retained support: integer radius and dyadic step keep every sample
    // point exactly representable, so the lattice lookup is exact.
    let box_radius = (config.domain_radius + basis.support_length).ceil();
    let lattice_resolution = measurement_resolution(config, box_radius)?;
    let samples_per_axis = (2.0 * box_radius) as u32 * (1u32 << lattice_resolution);
    let lattice = synthesize(&kept, &table, box_radius, lattice_resolution)?;
    let lattice_scale = f64::from(1u32 << lattice_resolution);
    let dim = config.dim;
    let g = move |x: &[f64]| {
        let mut idx = [0i64; 8];
        for axis in 0..dim {
            idx[axis] = (x[axis] * lattice_scale).round() as i64;
        }
        lattice.lattice_value(&idx[..dim]).expect("lattice covers the measurement box")
    };
    let measured_lpw_error = lpw_error(
        &f,
        &g,
        config.p.0,
        &weight,
        config.dim,
        box_radius,
        samples_per_axis,
    )?;

    let report = ApproxReport {
        grid: GridSummary {
            total_points: grid.total_points(),
            levels_retained: grid.num_levels(),
            level_cap,
        },
        a_priori_bound,
        quasinorm_full,
        quasinorm_truncated,
        bound_times_quasinorm: a_priori_bound * quasinorm_full,
        measured_lpw_error,
        measurement: MeasurementInfo {
            box_radius,
            lattice_resolution,
            samples_per_axis,
        },
        timing_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((report, kept))
}

/// Measurement lattice resolution: one dyadic step coarser than the
/// analysis quadrature, reduced until the lattice fits the per-dimension
/// point budget.
fn measurement_resolution(config: &RunConfig, box_radius: f64) -> Result<u32, CliError> {
    let per_axis_budget: f64 = match config.dim {
        1 => (1u32 << 24) as f64,
        2 => 4096.0,
        _ => 256.0,
    };
    let mut resolution = config.quad_resolution.saturating_sub(1).max(3);
    while resolution > 3 && 2.0 * box_radius * f64::from(1u32 << resolution) > per_axis_budget {
        resolution -= 1;
    }
    if 2.0 * box_radius * f64::from(1u32 << resolution) > per_axis_budget {
        return Err(CliError::config(format!(
            "measurement box of radius {box_radius} in dimension {} is too large to sample",
            config.dim
        )));
    }
    Ok(resolution)
}

/// `norm` subcommand: quasinorm of a coefficient file under the configured
/// smoothness functional, weight, and exponents.
pub fn run_norm(coeffs_path: &std::path::Path, config: &RunConfig) -> Result<f64, CliError> {
    let basis = build_basis(config.basis_order)?;
    let field = read_coefficients(coeffs_path, config.dim)?;
    let besov = BesovParams::new(
        config.p.0,
        config.q.0,
        config.delta2.to_norm()?,
        ExponentialWeight::new(config.b_w)?,
        basis.vanishing_moments,
    )?;
    Ok(sequence_quasinorm(&field, &besov)?)
}

/// Serialize a truncated coefficient field for the `approx --out` sidecar.
pub fn kept_to_json(kept: &CoefficientField) -> String {
    coefficients_to_json(kept)
}
