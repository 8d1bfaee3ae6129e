//! Windowed Fourier transforms of time-domain drives.

use sgphonon::numerics::{GaussLegendre, KnotSeries, NeumaierSum};
use sgphonon::{Error, ModeForce, Origin, Result};

use std::f64::consts::PI;

/// Refinement steps below this fraction of `∫|f|` count as converged.
const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub order: usize,
    /// Initial panels per oscillation period.
    pub panels_per_period: f64,
    /// Stop when two successive refinements agree to this relative accuracy.
    pub rel_tol: f64,
    pub max_refinements: usize,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            order: 16,
            panels_per_period: 8.0,
            rel_tol: 1e-8,
            max_refinements: 10,
            max_panels: 8_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Composite Gauss-Legendre on panels aligned with the breakpoints.
    Quadrature,
    /// Closed-form segment integrals of the piecewise-quadratic drive.
    ExactSegments,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::ExactSegments => "exact_segments",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierEstimate {
    pub re: f64,
    pub im: f64,
    pub method: Method,
    /// Panels used by the accepted refinement (zero for exact segments).
    pub panels: usize,
    pub refinements: usize,
    /// Magnitude of the last refinement step relative to the result.
    pub error_estimate: f64,
}

impl FourierEstimate {
    /// `|∫ f e^{iωt} dt|²`
    pub fn value(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// `∫_a^b f(t) e^{iωt} dt` by composite Gauss-Legendre, doubling the panel
/// count until successive results agree.
pub fn fourier_transfer_numeric(
    f: &dyn Fn(f64) -> f64,
    breakpoints: &[f64],
    window: (f64, f64),
    omega: f64,
    opts: &QuadratureOptions,
) -> Result<FourierEstimate> {
    let (a, b) = window;
    if !(b > a) || !(omega > 0.0) {
        return Err(Error::Domain(
            "empty window or non-positive frequency".into(),
        ));
    }
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breakpoints.iter().copied().filter(|&t| t > a && t < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let gl = GaussLegendre::new(opts.order);
    let period = 2.0 * PI / omega;
    let mut scale = 1.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut last_err = f64::INFINITY;
    for level in 0..=opts.max_refinements {
        let counts: Vec<usize> = cuts
            .windows(2)
            .map(|w| ((w[1] - w[0]) / period * opts.panels_per_period * scale).ceil() as usize)
            .map(|n| n.max(1))
            .collect();
        let panels: usize = counts.iter().sum();
        if panels > opts.max_panels {
            break;
        }
        let (re, im, l1) = integrate(f, &gl, &cuts, &counts, omega)?;
        if let Some((pr, pi)) = prev {
            let mag = (re * re + im * im).sqrt();
            let step = ((re - pr).powi(2) + (im - pi).powi(2)).sqrt();
            // rounding in the oscillatory sum is a fraction of ∫|f|, not of the result
            let floor = ROUNDING_FLOOR * l1;
            last_err = step.max(floor) / mag.max(1e-300);
            if last_err <= opts.rel_tol || step <= floor {
                return Ok(FourierEstimate {
                    re,
                    im,
                    method: Method::Quadrature,
                    panels,
                    refinements: level,
                    error_estimate: last_err,
                });
            }
        }
        prev = Some((re, im));
        scale *= 2.0;
    }
    Err(Error::NonConvergent {
        what: format!("Fourier quadrature at omega = {omega:e}"),
        achieved: last_err,
        iterations: opts.max_refinements,
    })
}

fn integrate(
    f: &dyn Fn(f64) -> f64,
    gl: &GaussLegendre,
    cuts: &[f64],
    counts: &[usize],
    omega: f64,
) -> Result<(f64, f64, f64)> {
    let mut re = NeumaierSum::default();
    let mut im = NeumaierSum::default();
    let mut l1 = NeumaierSum::default();
    for (w, &n) in cuts.windows(2).zip(counts) {
        let h = (w[1] - w[0]) / n as f64;
        for k in 0..n {
            let lo = w[0] + h * k as f64;
            let hi = if k + 1 == n { w[1] } else { lo + h };
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (x, wt) in gl.nodes().iter().zip(gl.weights()) {
                let t = mid + half * x;
                let v = f(t);
                if !v.is_finite() {
                    return Err(Error::NonFiniteDrive { t });
                }
                let (s, c) = (omega * t).sin_cos();
                re.add(wt * half * v * c);
                im.add(wt * half * v * s);
                l1.add(wt * half * v.abs());
            }
        }
    }
    Ok((re.value(), im.value(), l1.value()))
}

/// Exact transform of a closed piecewise-quadratic drive.
pub fn fourier_transfer_exact(series: &KnotSeries, omega: f64) -> FourierEstimate {
    let (re, im) = series.fourier(omega);
    FourierEstimate {
        re,
        im,
        method: Method::ExactSegments,
        panels: 0,
        refinements: 0,
        error_estimate: 0.0,
    }
}

/// `|Δf̃(ω)|²` of a mode force: quadrature while `ω Δt` stays within
/// `quadrature_budget` radians and its error estimate meets `opts.rel_tol`,
/// exact segments otherwise.
pub fn delta_force_transfer(
    force: &ModeForce,
    omega: f64,
    quadrature_budget: f64,
    opts: &QuadratureOptions,
) -> Result<FourierEstimate> {
    let p = force.protocol();
    let knots = force.delta_knots(Origin::MaxSeparation);
    if omega * p.delta_t() <= quadrature_budget {
        match (delta_force_quadrature(force, omega, opts), &knots) {
            (Ok(est), _) if est.error_estimate <= opts.rel_tol => return Ok(est),
            (Ok(est), None) => return Ok(est),
            (Err(e), None) => return Err(e),
            _ => {}
        }
    }
    match knots {
        Some(k) => Ok(fourier_transfer_exact(&k, omega)),
        None => delta_force_quadrature(force, omega, opts),
    }
}

/// Quadrature of `Δf(t) e^{iωt}` over the run, time origin at maximum separation.
pub fn delta_force_quadrature(
    force: &ModeForce,
    omega: f64,
    opts: &QuadratureOptions,
) -> Result<FourierEstimate> {
    let p = force.protocol();
    let f = |t: f64| force.delta(t);
    fourier_transfer_numeric(&f, &p.breakpoints(), (p.start(), p.end()), omega, opts)
}
