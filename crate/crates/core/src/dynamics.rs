//! Thermal initial conditions and the driven response of a single phonon mode.
//!
//! Mode coordinates are mass weighted: `u` in m·kg^½, `u̇` in m·kg^½/s.

use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::forces::ModeForce;
use crate::materials::PhysicalConstants;
use crate::numerics::{coth, Angle, Dd, GaussLegendre, KnotSeries, NeumaierSum};
use crate::protocol::{Arm, Origin};

/// `½ coth(ħω / 2 k_B T)`, the mean thermal occupation plus one half.
pub fn thermal_occupation(omega: f64, temperature: f64, c: &PhysicalConstants) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return domain(format!("mode frequency must be positive, got {omega:e}"));
    }
    if !(temperature >= 0.0) {
        return domain(format!(
            "temperature must be non-negative, got {temperature}"
        ));
    }
    if temperature == 0.0 {
        return Ok(0.5);
    }
    Ok(0.5 * coth(c.hbar * omega / (2.0 * c.k_b * temperature)))
}

/// Thermal widths `(σ_u, σ_u̇)` with `σ_u² = ħ n₀ / ω` and `σ_u̇² = ħ ω n₀`.
pub fn characteristic_widths(
    omega: f64,
    temperature: f64,
    c: &PhysicalConstants,
) -> Result<(f64, f64)> {
    let n0 = thermal_occupation(omega, temperature, c)?;
    Ok(((c.hbar * n0 / omega).sqrt(), (c.hbar * omega * n0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub temperature: f64,
    pub omega: f64,
    pub n0: f64,
    pub sigma_u: f64,
    pub sigma_udot: f64,
}

impl ThermalState {
    pub fn new(omega: f64, temperature: f64, c: &PhysicalConstants) -> Result<Self> {
        let n0 = thermal_occupation(omega, temperature, c)?;
        let (sigma_u, sigma_udot) = characteristic_widths(omega, temperature, c)?;
        Ok(ThermalState {
            temperature,
            omega,
            n0,
            sigma_u,
            sigma_udot,
        })
    }

    /// The point `(σ_u, σ_u̇)`, whose occupation equals `n₀`.
    pub fn representative(&self) -> ModeState {
        ModeState {
            u: self.sigma_u,
            udot: self.sigma_udot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeState {
    pub u: f64,
    pub udot: f64,
}

/// `(u̇² + ω² u²) / (2 ħ ω)`
pub fn occupation_at(state: ModeState, omega: f64, c: &PhysicalConstants) -> f64 {
    let wu = omega * state.u;
    (state.udot * state.udot + wu * wu) / (2.0 * c.hbar * omega)
}

/// Free rotation of a state through an elapsed time.
pub fn free_evolve(state: ModeState, omega: f64, elapsed: Dd) -> ModeState {
    let (s, co) = Angle::of(omega, elapsed).sin_cos();
    ModeState {
        u: state.u * co + state.udot * s / omega,
        udot: -state.u * omega * s + state.udot * co,
    }
}

/// Forcing term of the mode equation `ü + ω² u = f(t)`.
pub enum Drive<'a> {
    /// Exact piecewise-quadratic drive; must start at or after the initial time.
    Knots(&'a KnotSeries),
    /// Sampled drive, integrated by composite Gauss-Legendre between breakpoints.
    Sampled {
        f: &'a dyn Fn(f64) -> f64,
        breakpoints: &'a [f64],
    },
}

const PANEL_ORDER: usize = 16;
const MAX_PANELS: usize = 4_000_000;

/// State at `t_end` of a mode starting from `initial` at `t_start`.
pub fn evolve_mode(
    initial: ModeState,
    omega: f64,
    drive: Drive<'_>,
    t_start: f64,
    t_end: f64,
) -> Result<ModeState> {
    if !(omega > 0.0) || !omega.is_finite() {
        return domain(format!("mode frequency must be positive, got {omega:e}"));
    }
    if !(t_end >= t_start) {
        return domain("evolution must run forward in time");
    }
    let free = free_evolve(initial, omega, Dd::sum(t_end, -t_start));
    let (du, dv) = match drive {
        Drive::Knots(series) => {
            if let Some(first) = series.start() {
                if first.to_f64() < t_start {
                    return domain("knot drive starts before the initial time");
                }
            }
            series.duhamel(omega, t_end)
        }
        Drive::Sampled { f, breakpoints } => {
            duhamel_quadrature(omega, f, breakpoints, t_start, t_end)?
        }
    };
    Ok(ModeState {
        u: free.u + du,
        udot: free.udot + dv,
    })
}

/// `(∫ f(t') sin(ω(t - t'))/ω dt', ∫ f(t') cos(ω(t - t')) dt')` over `[t0, t]`.
pub fn duhamel_quadrature(
    omega: f64,
    f: &dyn Fn(f64) -> f64,
    breakpoints: &[f64],
    t0: f64,
    t: f64,
) -> Result<(f64, f64)> {
    let gl = GaussLegendre::new(PANEL_ORDER);
    let mut cuts: Vec<f64> = std::iter::once(t0)
        .chain(breakpoints.iter().copied().filter(|&b| b > t0 && b < t))
        .chain(std::iter::once(t))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let total_panels: f64 = cuts
        .windows(2)
        .map(|w| panels_for(omega, w[1] - w[0]) as f64)
        .sum();
    if total_panels > MAX_PANELS as f64 {
        return domain(format!(
            "quadrature would need {total_panels:e} panels; use the knot drive"
        ));
    }
    let mut u = NeumaierSum::default();
    let mut v = NeumaierSum::default();
    let mut bad: Option<f64> = None;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = panels_for(omega, b - a);
        let h = (b - a) / n as f64;
        for k in 0..n {
            let lo = a + h * k as f64;
            let hi = if k + 1 == n { b } else { lo + h };
            // sample strictly inside the panel, so one-sided limits are used at breakpoints
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (x, wt) in gl.nodes().iter().zip(gl.weights()) {
                let tp = mid + half * x;
                let ft = f(tp);
                if !ft.is_finite() {
                    bad.get_or_insert(tp);
                    continue;
                }
                let (s, c) = (omega * (t - tp)).sin_cos();
                u.add(wt * half * ft * s / omega);
                v.add(wt * half * ft * c);
            }
        }
    }
    if let Some(tp) = bad {
        return Err(Error::NonFiniteDrive { t: tp });
    }
    Ok((u.value(), v.value()))
}

/// Panels of at most half an oscillation period.
fn panels_for(omega: f64, len: f64) -> usize {
    ((omega * len / std::f64::consts::PI).ceil() as usize).max(1)
}

/// `(Δu, Δu̇)` at protocol-local time `t` (zero at switch-on), from the exact drive.
pub fn arm_deltas(force: &ModeForce, omega: f64, t: f64) -> Result<(f64, f64)> {
    if !(omega > 0.0) {
        return domain("mode frequency must be positive");
    }
    match force.delta_knots(Origin::Start) {
        Some(k) => Ok(k.duhamel_dd(omega, local_time(force, t))),
        None => arm_deltas_quadrature(force, omega, t),
    }
}

/// `t` in extended precision, snapped to the breakpoint it rounds to.
fn local_time(force: &ModeForce, t: f64) -> Dd {
    force
        .protocol()
        .breakpoints_dd(Origin::Start)
        .into_iter()
        .find(|b| b.to_f64() == t)
        .unwrap_or_else(|| Dd::new(t))
}

/// Same quantity by direct quadrature of the time-domain forces.
pub fn arm_deltas_quadrature(force: &ModeForce, omega: f64, t: f64) -> Result<(f64, f64)> {
    let p = force.protocol();
    let start = p.start();
    let bps: Vec<f64> = p.breakpoints().iter().map(|b| b - start).collect();
    let f = |tl: f64| force.delta_local(tl);
    duhamel_quadrature(omega, &f, &bps, 0.0, t)
}

/// Normalized Gaussian Wigner function of a thermal mode.
pub fn wigner_density(u: f64, udot: f64, sigma_u: f64, sigma_udot: f64) -> Result<f64> {
    if !(sigma_u > 0.0) || !(sigma_udot > 0.0) {
        return domain("Wigner widths must be positive");
    }
    let a = u / sigma_u;
    let b = udot / sigma_udot;
    Ok((-0.5 * (a * a + b * b)).exp() / (2.0 * std::f64::consts::PI * sigma_u * sigma_udot))
}

pub const TIME_SERIES_HEADER: &str = "t,u_L,udot_L,u_R,udot_R,n_L,n_R";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub left: ModeState,
    pub right: ModeState,
    pub n_left: f64,
    pub n_right: f64,
}

/// Both arms of one mode starting from the same thermal representative.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmHistory {
    pub omega: f64,
    pub thermal: ThermalState,
    pub rows: Vec<SeriesRow>,
    /// Set when `omega` lies below the fundamental tone of the diamond.
    pub below_fundamental: bool,
}

impl ArmHistory {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(TIME_SERIES_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t, r.left.u, r.left.udot, r.right.u, r.right.udot, r.n_left, r.n_right
            );
        }
        s
    }
}

/// Sample both arm responses on `samples + 1` equally spaced local times in `[0, t_end]`.
pub fn arm_history(
    force: &ModeForce,
    omega: f64,
    temperature: f64,
    t_end: f64,
    samples: usize,
) -> Result<ArmHistory> {
    let c = force.constants();
    let thermal = ThermalState::new(omega, temperature, c)?;
    let p = force.protocol();
    if !(t_end > 0.0) || samples == 0 {
        return domain("history needs a positive span and at least one sample");
    }
    let knots = [Arm::Left, Arm::Right].map(|a| force.arm_knots(a, Origin::Start));
    let init = thermal.representative();
    let t6 = p.breakpoints_dd(Origin::Start)[5];
    let t_off = t6.to_f64();
    let mut at_off: Option<[ModeState; 2]> = None;
    let mut rows = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = t_end * i as f64 / samples as f64;
        let st = if t > t_off {
            // drive is off: rotate the closing state so the occupation stays fixed
            let base = match at_off {
                Some(s) => s,
                None => *at_off.insert(drive_both(force, &knots, init, omega, t_off)?),
            };
            base.map(|s| free_evolve(s, omega, Dd::new(t) - t6))
        } else {
            drive_both(force, &knots, init, omega, t)?
        };
        rows.push(SeriesRow {
            t,
            left: st[0],
            right: st[1],
            n_left: occupation_at(st[0], omega, c),
            n_right: occupation_at(st[1], omega, c),
        });
    }
    let omega_0 = force.material().fundamental_tone(p.mass())?;
    Ok(ArmHistory {
        omega,
        thermal,
        rows,
        below_fundamental: omega < omega_0,
    })
}

fn evolve_knots(init: ModeState, omega: f64, series: &KnotSeries, t: Dd) -> ModeState {
    let free = free_evolve(init, omega, t);
    let (du, dv) = series.duhamel_dd(omega, t);
    ModeState {
        u: free.u + du,
        udot: free.udot + dv,
    }
}

fn drive_both(
    force: &ModeForce,
    knots: &[Option<KnotSeries>; 2],
    init: ModeState,
    omega: f64,
    t: f64,
) -> Result<[ModeState; 2]> {
    let p = force.protocol();
    let mut st = [ModeState::default(); 2];
    for (k, arm) in [Arm::Left, Arm::Right].into_iter().enumerate() {
        st[k] = match &knots[k] {
            Some(series) => evolve_knots(init, omega, series, local_time(force, t)),
            None => {
                let f = |tl: f64| force.arm_local(arm, tl);
                let start = p.start();
                let bps: Vec<f64> = p.breakpoints().iter().map(|b| b - start).collect();
                evolve_mode(
                    init,
                    omega,
                    Drive::Sampled {
                        f: &f,
                        breakpoints: &bps,
                    },
                    0.0,
                    t,
                )?
            }
        };
    }
    Ok(st)
}
