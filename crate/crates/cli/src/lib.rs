//! Scenario runner, parameter sweeps and contrast-map contours for `sgphonon`.

pub mod config;
pub mod contour;
pub mod error;
pub mod golden;
pub mod scenario;
pub mod sweep;

pub use config::{MaterialSel, Scenario, ScenarioConfig, ScenarioName};
pub use contour::{marching_squares, Contour, Raster};
pub use error::{CliError, CliResult};
pub use scenario::{compute_scenario, run_scenario, RunOptions, RunSummary};
pub use sweep::{contrast_csv, parse_contrast_csv, sweep, ContrastRow, SweepGrid};
