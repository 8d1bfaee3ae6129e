//! Golden-file build and regression check.

use std::path::{Path, PathBuf};

use sgphonon::{MaterialModel, PhysicalConstants};
use sgphonon_oracle::{
    check_golden, golden_table_build, golden_to_string, parse_golden, GoldenGrid,
};

use crate::error::{CliError, CliResult};

/// Drift allowed between golden values and the current closed forms.
pub const GOLDEN_TOLERANCE: f64 = 1e-9;

pub fn default_golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden_contrast_curves.csv")
}

pub fn build_golden(grid: &GoldenGrid, material: &MaterialModel) -> CliResult<String> {
    let rows = golden_table_build(grid, material, &PhysicalConstants::default())?;
    Ok(golden_to_string(&rows))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCheck {
    pub rows: usize,
    pub max_rel_err: f64,
    /// `(row, golden, current)` beyond tolerance.
    pub failures: Vec<(usize, f64, f64)>,
}

impl GoldenCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_golden_text(text: &str, material: &MaterialModel, tol: f64) -> CliResult<GoldenCheck> {
    let rows = parse_golden(text).map_err(|e| CliError::Config(format!("golden file: {e}")))?;
    let drift = check_golden(&rows, material, &PhysicalConstants::default())?;
    let max_rel_err = drift.iter().map(|d| d.rel_err).fold(0.0, f64::max);
    let failures = drift
        .iter()
        .filter(|d| !(d.rel_err < tol))
        .map(|d| (d.row, d.golden, d.current))
        .collect();
    Ok(GoldenCheck {
        rows: rows.len(),
        max_rel_err,
        failures,
    })
}
