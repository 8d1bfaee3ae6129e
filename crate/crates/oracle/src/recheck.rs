//! Phase-space re-computation of the transfer function.

use sgphonon::dynamics::{arm_deltas, arm_deltas_quadrature};
use sgphonon::numerics::relative_error;
use sgphonon::{ModeForce, Result};

use crate::fourier::{delta_force_transfer, FourierEstimate, Method, QuadratureOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub quantity: String,
    pub analytic: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub panels: usize,
    pub refinements: usize,
    pub method: Method,
}

impl OracleResult {
    pub fn new(quantity: impl Into<String>, analytic: f64, est: &FourierEstimate) -> Self {
        let oracle = est.value();
        OracleResult {
            quantity: quantity.into(),
            analytic,
            oracle,
            rel_err: relative_error(analytic, oracle),
            panels: est.panels,
            refinements: est.refinements,
            method: est.method,
        }
    }
}

/// `ω² Δu(Δt)² + Δu̇(Δt)²` from the mode response against `|Δf̃(ω)|²`.
///
/// Where the Fourier side is a quadrature the response is one too (sine and
/// cosine kernels against `e^{iωt}`); elsewhere both use the exact
/// piecewise-quadratic drive.
pub fn duhamel_recheck(
    force: &ModeForce,
    omega: f64,
    quadrature_budget: f64,
    opts: &QuadratureOptions,
) -> Result<OracleResult> {
    let dt = force.protocol().delta_t();
    let est = delta_force_transfer(force, omega, quadrature_budget, opts)?;
    let (du, dv) = match est.method {
        Method::Quadrature => arm_deltas_quadrature(force, omega, dt)?,
        Method::ExactSegments => arm_deltas(force, omega, dt)?,
    };
    let norm = omega * omega * du * du + dv * dv;
    Ok(OracleResult::new(
        format!("{} phase-space norm", force.channel()),
        norm,
        &est,
    ))
}
