//! Independent numerical checks of the closed-form transfer functions.

pub mod fourier;
pub mod golden;
pub mod recheck;

pub use fourier::{
    delta_force_quadrature, delta_force_transfer, fourier_transfer_exact, fourier_transfer_numeric,
    FourierEstimate, Method, QuadratureOptions,
};
pub use golden::{
    check_golden, golden_table_build, golden_to_string, log_space, parse_golden, read_golden,
    write_golden, GoldenDrift, GoldenGrid, GoldenRow, GOLDEN_HEADER,
};
pub use recheck::{duhamel_recheck, OracleResult};
