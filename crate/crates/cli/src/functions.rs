//! Built-in test functions and command-line parameter overrides.

use besovgrid_core::{eval_tensor, DyadicTable, LevelIndex, TranslationIndex};

use crate::config::TestFunctionSpec;
use crate::CliError;

/// A resolved test function, evaluable at any point of ℝᵈ.
pub type TestFunction = Box<dyn Fn(&[f64]) -> f64 + Sync>;

/// Resolve a function spec against a run dimension and evaluation table.
///
/// `basis_element` needs the table; the analytic functions do not, but all
/// three go through the same resolution point so the orchestration code can
/// stay uniform.
pub fn resolve(
    spec: &TestFunctionSpec,
    dim: usize,
    table: &DyadicTable,
) -> Result<TestFunction, CliError> {
    match spec {
        TestFunctionSpec::ExpL1 { a } => {
            let a = positive_rate(*a)?;
            Ok(Box::new(move |x: &[f64]| {
                (-a * x.iter().map(|t| t.abs()).sum::<f64>()).exp()
            }))
        }
        TestFunctionSpec::Gaussian { a } => {
            let a = positive_rate(*a)?;
            Ok(Box::new(move |x: &[f64]| {
                (-a * x.iter().map(|t| t * t).sum::<f64>()).exp()
            }))
        }
        TestFunctionSpec::BasisElement { j, m } => {
            if j.len() != dim || m.len() != dim {
                return Err(CliError::config(format!(
                    "basis_element indices must have dimension {dim}, got j: {}, m: {}",
                    j.len(),
                    m.len()
                )));
            }
            let level = LevelIndex::from_slice(j);
            let translation = TranslationIndex::from_slice(m);
            let table = table.clone();
            Ok(Box::new(move |x: &[f64]| {
                eval_tensor(&table, &level, &translation, x).expect("validated dimensions")
            }))
        }
    }
}

fn positive_rate(a: f64) -> Result<f64, CliError> {
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(CliError::config(format!("decay rate a = {a} must be finite and positive")))
    }
}

/// Apply `--function` / `--param key=value` overrides on top of the
/// configured test function.
///
/// Recognised parameters: `a=<float>` for the analytic functions, and
/// `j=<ints>` / `m=<ints>` (comma-separated) for `basis_element`. A bare
/// `--param` without `--function` adjusts the configured function in place.
pub fn apply_overrides(
    base: &TestFunctionSpec,
    function: Option<&str>,
    params: &[String],
) -> Result<TestFunctionSpec, CliError> {
    let mut spec = match function {
        None => base.clone(),
        Some("exp_l1") => TestFunctionSpec::ExpL1 { a: 1.0 },
        Some("gaussian") => TestFunctionSpec::Gaussian { a: 1.0 },
        Some("basis_element") => TestFunctionSpec::BasisElement { j: Vec::new(), m: Vec::new() },
        Some(other) => {
            return Err(CliError::config(format!(
                "unknown test function \"{other}\" (expected exp_l1, gaussian, or basis_element)"
            )))
        }
    };
    for raw in params {
        let (key, value) = raw
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("--param expects key=value, got \"{raw}\"")))?;
        match (&mut spec, key) {
            (TestFunctionSpec::ExpL1 { a }, "a") | (TestFunctionSpec::Gaussian { a }, "a") => {
                *a = value
                    .parse()
                    .map_err(|e| CliError::config(format!("--param a: {e}")))?;
            }
            (TestFunctionSpec::BasisElement { j, .. }, "j") => {
                *j = parse_int_list(value).map_err(|e| CliError::config(format!("--param j: {e}")))?;
            }
            (TestFunctionSpec::BasisElement { m, .. }, "m") => {
                *m = parse_int_list(value).map_err(|e| CliError::config(format!("--param m: {e}")))?;
            }
            _ => {
                return Err(CliError::config(format!(
                    "parameter \"{key}\" does not apply to the selected test function"
                )))
            }
        }
    }
    Ok(spec)
}

fn parse_int_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|part| part.trim().parse::<T>().map_err(|e| e.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use besovgrid_core::{build_basis, tabulate};

    #[test]
    fn analytic_functions_evaluate() {
        let basis = build_basis(2).unwrap();
        let table = tabulate(&basis, 4).unwrap();
        let f = resolve(&TestFunctionSpec::ExpL1 { a: 2.0 }, 2, &table).unwrap();
        assert!((f(&[1.0, -1.0]) - (-4.0f64).exp()).abs() < 1e-15);
        let g = resolve(&TestFunctionSpec::Gaussian { a: 0.5 }, 2, &table).unwrap();
        assert!((g(&[1.0, 2.0]) - (-2.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn overrides_replace_and_adjust() {
        let base = TestFunctionSpec::ExpL1 { a: 1.0 };
        let spec = apply_overrides(&base, None, &["a=0.5".into()]).unwrap();
        assert_eq!(spec, TestFunctionSpec::ExpL1 { a: 0.5 });
        let spec =
            apply_overrides(&base, Some("basis_element"), &["j=1,0".into(), "m=2,-1".into()])
                .unwrap();
        assert_eq!(spec, TestFunctionSpec::BasisElement { j: vec![1, 0], m: vec![2, -1] });
        assert!(apply_overrides(&base, Some("unknown"), &[]).is_err());
        assert!(apply_overrides(&base, None, &["j=1".into()]).is_err());
    }
}
