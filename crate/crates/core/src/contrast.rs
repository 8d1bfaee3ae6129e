//! Closed-form transfer functions and the thermal contrast of each channel.
//!
//! Each phonon mode contributes `ln C_q = -coth(ħω/2k_BT) |Δf̃_q(ω)|² / (4ħω)`,
//! and the total is summed in log space over the harmonic ladder.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::forces::{CouplingChannel, DiaForm};
use crate::materials::{power_tail, sum_over_ladder, MaterialModel, PhysicalConstants, Truncation};
use crate::numerics::{coth, Angle, Dd, NeumaierSum};
use crate::protocol::SplitProtocol;

/// `sin(τ_f ω) - 2 sin((τ_a + τ_f) ω) + sin((2τ_a + τ_f) ω)`,
/// evaluated as `-4 sin((τ_a + τ_f) ω) sin²(τ_a ω / 2)`.
pub fn gamma(omega: f64, tau_a: f64, tau_f: f64) -> f64 {
    let s1 = Angle::of(omega, Dd::sum(tau_a, tau_f)).sin();
    let s2 = Angle::of(omega, Dd::new(0.5 * tau_a)).sin();
    -4.0 * s1 * s2 * s2
}

/// The three-sine form, for cross-checks at moderate phases.
pub fn gamma_three_sine(omega: f64, tau_a: f64, tau_f: f64) -> f64 {
    Angle::of(omega, Dd::new(tau_f)).sin() - 2.0 * Angle::of(omega, Dd::sum(tau_a, tau_f)).sin()
        + Angle::of(omega, Dd::sum(2.0 * tau_a, tau_f)).sin()
}

/// Whether `Γ²` is evaluated or replaced by its envelope value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaTreatment {
    #[default]
    Exact,
    Unit,
}

impl GammaTreatment {
    fn gamma_sq(self, omega: f64, p: &SplitProtocol) -> f64 {
        match self {
            GammaTreatment::Exact => {
                let g = gamma(omega, p.tau_a(), p.tau_f());
                g * g
            }
            GammaTreatment::Unit => 1.0,
        }
    }

    fn bound(self) -> f64 {
        match self {
            GammaTreatment::Exact => 16.0,
            GammaTreatment::Unit => 1.0,
        }
    }
}

/// `|Δf̃_s|² = M (2ΔX_m / (τ_a² ω))² Γ²`
pub fn transfer_spin_sq(p: &SplitProtocol, omega: f64) -> f64 {
    let g = gamma(omega, p.tau_a(), p.tau_f());
    spin_prefactor(p, omega) * g * g
}

fn spin_prefactor(p: &SplitProtocol, omega: f64) -> f64 {
    let ta2 = p.tau_a() * p.tau_a();
    let k = 2.0 * p.delta_x_max() / (ta2 * omega);
    p.mass() * k * k
}

/// `|Δf̃_dia|² = M⁵ (χ ΔX_m³ / (2 μ₀ μ² τ_a⁶ ω³))² Γ²`
pub fn transfer_dia_sq(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    omega: f64,
) -> f64 {
    let g = gamma(omega, p.tau_a(), p.tau_f());
    dia_prefactor(p, material, c, omega) * g * g
}

fn dia_prefactor(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    omega: f64,
) -> f64 {
    let dx = p.delta_x_max();
    let ta2 = p.tau_a() * p.tau_a();
    let mu = p.mu();
    let k = material.susceptibility * dx * dx * dx
        / (2.0 * c.mu_0 * mu * mu * ta2 * ta2 * ta2 * omega * omega * omega);
    let m = p.mass();
    m * m * m * m * m * k * k
}

/// Transfer function of the induced-dipole drive `Δf = (2 Σα / ε_r) η_e² ΔX(t) / √M`.
pub fn transfer_induced_dipole_sq(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    eta_e: f64,
    omega: f64,
) -> f64 {
    let g = gamma(omega, p.tau_a(), p.tau_f());
    induced_pipeline_prefactor(p, material, c, eta_e, omega) * g * g
}

fn induced_pipeline_prefactor(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    eta_e: f64,
    omega: f64,
) -> f64 {
    let er = material.dielectric;
    let alpha_total = 3.0 * c.eps_0 * material.volume(p.mass()) * (er - 1.0) / (er + 2.0);
    let k = 2.0 * alpha_total / er * eta_e * eta_e;
    let ta2 = p.tau_a() * p.tau_a();
    let ft = 2.0 * p.delta_x_max() / (ta2 * omega * omega * omega);
    k * k / p.mass() * ft * ft
}

/// Squared magnitude inside the closed-form induced-dipole contrast, without `Γ²`:
/// `(3 V ΔX_m η_e² / (τ_a² ω³) · ε₀ (ε_r - 1) / (ε_r (ε_r + 2)))²`.
pub fn induced_dipole_factor(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    eta_e: f64,
    omega: f64,
) -> f64 {
    let er = material.dielectric;
    let v = material.volume(p.mass());
    let ta2 = p.tau_a() * p.tau_a();
    let k = 3.0 * v * p.delta_x_max() * eta_e * eta_e / (ta2 * omega * omega * omega)
        * c.eps_0
        * (er - 1.0)
        / (er * (er + 2.0));
    k * k
}

/// `coth(ħω / 2k_BT)`, equal to 1 at `T = 0`.
pub fn thermal_factor(omega: f64, temperature: f64, c: &PhysicalConstants) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        coth(c.hbar * omega / (2.0 * c.k_b * temperature))
    }
}

/// `ln C_q = -coth(ħω/2k_BT) |Δf̃|² / (4ħω)`
pub fn mode_ln_contrast(
    transfer_sq: f64,
    omega: f64,
    temperature: f64,
    c: &PhysicalConstants,
) -> Result<f64> {
    if !(omega > 0.0) {
        return domain(format!("mode frequency must be positive, got {omega:e}"));
    }
    if !(transfer_sq >= 0.0) || !(temperature >= 0.0) {
        return domain("transfer and temperature must be non-negative");
    }
    if transfer_sq == 0.0 {
        return Ok(0.0);
    }
    Ok(-thermal_factor(omega, temperature, c) * transfer_sq / (4.0 * c.hbar * omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Analytic => "analytic",
            Provenance::Oracle => "oracle",
        })
    }
}

/// How far a closed form can be trusted for the protocol it was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fidelity {
    /// Equal to the Fourier transform of the time-domain force.
    Exact,
    /// The `Γ/ω³` diamagnetic form with free flight, where the literal force
    /// has extra jumps that the form ignores.
    #[serde(rename = "paper-approximate")]
    FlightApproximate,
    /// Formula applied verbatim although it differs from the force pipeline.
    VerbatimFormula,
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fidelity::Exact => "exact",
            Fidelity::FlightApproximate => "paper-approximate",
            Fidelity::VerbatimFormula => "verbatim_formula",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeContribution {
    pub n: usize,
    pub omega: f64,
    pub ln_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastOptions {
    pub truncation: Truncation,
    pub gamma: GammaTreatment,
    /// Keep the per-mode breakdown in the report.
    pub keep_modes: bool,
}

impl Default for ContrastOptions {
    fn default() -> Self {
        ContrastOptions {
            truncation: Truncation::default(),
            gamma: GammaTreatment::Exact,
            keep_modes: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub channel: String,
    pub ln_contrast_total: f64,
    pub contrast: f64,
    pub modes_used: usize,
    pub per_mode: Vec<ModeContribution>,
    pub fidelity_flag: Fidelity,
    pub gamma: GammaTreatment,
    pub converged: bool,
    /// Bound on `|ln C|` carried by the modes beyond `modes_used`.
    pub tail_bound: f64,
    pub provenance: Provenance,
    pub mass: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub flight_fraction: f64,
    pub temperature: f64,
}

pub const CONTRAST_CSV_HEADER: &str =
    "channel,M,delta_x,delta_t,flight_fraction,T,neg_ln_c,contrast,modes_used,fidelity";

impl ContrastReport {
    pub fn neg_ln_contrast(&self) -> f64 {
        -self.ln_contrast_total
    }

    /// Fidelity column: the flag, plus `+unit_gamma` when `Γ²` was replaced by 1.
    pub fn fidelity_label(&self) -> String {
        match self.gamma {
            GammaTreatment::Exact => self.fidelity_flag.to_string(),
            GammaTreatment::Unit => format!("{}+unit_gamma", self.fidelity_flag),
        }
    }

    /// One row under [`CONTRAST_CSV_HEADER`], without the trailing newline.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}",
            self.channel,
            self.mass,
            self.delta_x,
            self.delta_t,
            self.flight_fraction,
            self.temperature,
            self.neg_ln_contrast(),
            self.contrast,
            self.modes_used,
            self.fidelity_label()
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Mode sum of a per-mode `ln C_q`; `|ln C_q| <= bound_coeff · coth(ħω/2kT) / ω^power`.
#[allow(clippy::too_many_arguments)]
fn ladder_report<F>(
    channel: &str,
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
    opts: &ContrastOptions,
    fidelity: Fidelity,
    bound_coeff: f64,
    power: f64,
    mut per_mode: F,
) -> Result<ContrastReport>
where
    F: FnMut(f64) -> f64,
{
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return domain(format!(
            "temperature must be non-negative, got {temperature}"
        ));
    }
    let omega_0 = material.fundamental_tone(p.mass())?;
    // coth(x) <= 1 + 1/x
    let thermal_ratio = if temperature == 0.0 {
        0.0
    } else {
        2.0 * c.k_b * temperature / (c.hbar * omega_0)
    };
    let scale = bound_coeff / omega_0.powf(power);
    let sum = sum_over_ladder(
        omega_0,
        opts.truncation,
        |_, w| per_mode(w),
        |n| scale * (power_tail(n, power) + thermal_ratio * power_tail(n, power + 1.0)),
    )?;
    if sum.total > 0.0 {
        return Err(Error::Domain("positive ln-contrast".into()));
    }
    let per_mode = if opts.keep_modes {
        sum.terms
            .iter()
            .enumerate()
            .map(|(i, &ln_c)| ModeContribution {
                n: i + 1,
                omega: (i + 1) as f64 * omega_0,
                ln_c,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(ContrastReport {
        channel: channel.to_string(),
        ln_contrast_total: sum.total,
        contrast: sum.total.exp(),
        modes_used: sum.terms.len(),
        per_mode,
        fidelity_flag: fidelity,
        gamma: opts.gamma,
        converged: sum.converged,
        tail_bound: sum.tail_bound,
        provenance: Provenance::Analytic,
        mass: p.mass(),
        delta_x: p.delta_x_max(),
        delta_t: p.delta_t(),
        flight_fraction: p.flight_fraction(),
        temperature,
    })
}

/// `-ln C = Σ_q coth(ħω_q/2k_BT) M ΔX_m² Γ² / (ħ τ_a⁴ ω_q³)`
pub fn ln_contrast_spin(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
    opts: &ContrastOptions,
) -> Result<ContrastReport> {
    let ta2 = p.tau_a() * p.tau_a();
    let dx = p.delta_x_max();
    let k = p.mass() * dx * dx / (c.hbar * ta2 * ta2);
    let gt = opts.gamma;
    ladder_report(
        "spin",
        p,
        material,
        c,
        temperature,
        opts,
        Fidelity::Exact,
        k * gt.bound(),
        3.0,
        |w| -thermal_factor(w, temperature, c) * k * gt.gamma_sq(w, p) / (w * w * w),
    )
}

fn dia_fidelity(p: &SplitProtocol) -> Fidelity {
    if p.tau_f() == 0.0 {
        Fidelity::Exact
    } else {
        Fidelity::FlightApproximate
    }
}

/// `-ln C = Σ_q coth(ħω_q/2k_BT) χ² M⁵ ΔX_m⁶ Γ² / (16 μ₀² μ⁴ ħ τ_a¹² ω_q⁷)`
pub fn ln_contrast_dia(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
    opts: &ContrastOptions,
) -> Result<ContrastReport> {
    let k = dia_coefficient(p, material, c);
    let gt = opts.gamma;
    ladder_report(
        "dia",
        p,
        material,
        c,
        temperature,
        opts,
        dia_fidelity(p),
        k * gt.bound(),
        7.0,
        |w| {
            let w3 = w * w * w;
            -thermal_factor(w, temperature, c) * k * gt.gamma_sq(w, p) / (w3 * w3 * w)
        },
    )
}

/// `χ² M⁵ ΔX_m⁶ / (16 μ₀² μ⁴ ħ τ_a¹²)`
fn dia_coefficient(p: &SplitProtocol, material: &MaterialModel, c: &PhysicalConstants) -> f64 {
    let m = p.mass();
    let dx = p.delta_x_max();
    let dx3 = dx * dx * dx;
    let ta2 = p.tau_a() * p.tau_a();
    let ta6 = ta2 * ta2 * ta2;
    let mu2 = p.mu() * p.mu();
    let chi = material.susceptibility;
    // grouped so that no intermediate leaves the double range
    let a = chi * dx3 / (c.mu_0 * mu2 * ta6);
    a * a * m * m * m * m * m / (16.0 * c.hbar)
}

/// Closed-form induced-dipole contrast,
/// `-ln C = Σ_q coth(ħω_q/2k_BT)/(ħω_q) |3VΔX_m η_e²/(τ_a²ω_q³) · ε₀(ε_r-1)/(ε_r(ε_r+2)) · Γ|²`.
pub fn ln_contrast_induced_dipole(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
    eta_e: f64,
    opts: &ContrastOptions,
) -> Result<ContrastReport> {
    if !eta_e.is_finite() {
        return domain("eta_e must be finite");
    }
    let omega_0 = material.fundamental_tone(p.mass())?;
    // factor at ω₀ times (ω₀/ω)^6
    let k0 = induced_dipole_factor(p, material, c, eta_e, omega_0) / c.hbar;
    let w06 = omega_0.powi(6);
    let gt = opts.gamma;
    ladder_report(
        "induced_dipole",
        p,
        material,
        c,
        temperature,
        opts,
        Fidelity::VerbatimFormula,
        k0 * w06 * gt.bound(),
        7.0,
        |w| {
            let f = induced_dipole_factor(p, material, c, eta_e, w);
            -thermal_factor(w, temperature, c) * f * gt.gamma_sq(w, p) / (c.hbar * w)
        },
    )
}

/// Induced-dipole contrast from the time-domain force through the generic per-mode formula.
pub fn ln_contrast_induced_dipole_pipeline(
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
    eta_e: f64,
    opts: &ContrastOptions,
) -> Result<ContrastReport> {
    let omega_0 = material.fundamental_tone(p.mass())?;
    let t0 = induced_pipeline_prefactor(p, material, c, eta_e, omega_0);
    let gt = opts.gamma;
    let mut report = ladder_report(
        "induced_dipole",
        p,
        material,
        c,
        temperature,
        opts,
        Fidelity::Exact,
        t0 * omega_0.powi(6) / (4.0 * c.hbar) * gt.bound(),
        7.0,
        |w| {
            let t = induced_pipeline_prefactor(p, material, c, eta_e, w) * gt.gamma_sq(w, p);
            -thermal_factor(w, temperature, c) * t / (4.0 * c.hbar * w)
        },
    )?;
    report.channel = "induced_dipole_pipeline".into();
    Ok(report)
}

/// Channel dispatch for the three channels with closed forms.
pub fn ln_contrast(
    channel: CouplingChannel,
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
    opts: &ContrastOptions,
) -> Result<ContrastReport> {
    match channel {
        CouplingChannel::SpinMagnetic => ln_contrast_spin(p, material, c, temperature, opts),
        CouplingChannel::Diamagnetic(DiaForm::Literal)
        | CouplingChannel::Diamagnetic(DiaForm::HeldGradient) => {
            ln_contrast_dia(p, material, c, temperature, opts)
        }
        CouplingChannel::InducedDipole { eta_e, .. } => {
            ln_contrast_induced_dipole(p, material, c, temperature, eta_e, opts)
        }
        CouplingChannel::IntrinsicDipole { .. } => {
            // a linear field gives both arms the same force
            let mut r = ladder_report(
                "intrinsic_dipole",
                p,
                material,
                c,
                temperature,
                &ContrastOptions {
                    truncation: Truncation::Fixed { modes: 1 },
                    ..*opts
                },
                Fidelity::Exact,
                0.0,
                3.0,
                |_| 0.0,
            )?;
            r.converged = true;
            Ok(r)
        }
    }
}

/// Sum of per-channel `ln C`, treating the channels as independent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedContrast {
    pub label: String,
    pub channels: Vec<String>,
    pub ln_contrast_total: f64,
    pub contrast: f64,
}

pub fn combine_reports(reports: &[ContrastReport]) -> CombinedContrast {
    let total: NeumaierSum = reports.iter().map(|r| r.ln_contrast_total).collect();
    let total = total.value();
    CombinedContrast {
        label: "combined".into(),
        channels: reports.iter().map(|r| r.channel.clone()).collect(),
        ln_contrast_total: total,
        contrast: total.exp(),
    }
}

/// `|Δf̃(ω)|²` on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSpectrum {
    pub channel: String,
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

pub fn transfer_spectrum(
    channel: CouplingChannel,
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    omega: &[f64],
) -> Result<TransferSpectrum> {
    if omega.is_empty() || omega.windows(2).any(|w| !(w[1] > w[0])) || !(omega[0] > 0.0) {
        return domain("frequency grid must be positive and strictly increasing");
    }
    let values = omega
        .iter()
        .map(|&w| match channel {
            CouplingChannel::SpinMagnetic => transfer_spin_sq(p, w),
            CouplingChannel::Diamagnetic(_) => transfer_dia_sq(p, material, c, w),
            CouplingChannel::InducedDipole { eta_e, .. } => {
                transfer_induced_dipole_sq(p, material, c, eta_e, w)
            }
            CouplingChannel::IntrinsicDipole { .. } => 0.0,
        })
        .collect();
    Ok(TransferSpectrum {
        channel: channel.label().into(),
        omega: omega.to_vec(),
        values,
        provenance: Provenance::Analytic,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    HighT,
    LowT,
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high_t" | "highT" | "high" => Ok(Regime::HighT),
            "low_t" | "lowT" | "low" => Ok(Regime::LowT),
            other => Err(Error::Domain(format!(
                "unknown temperature regime '{other}'"
            ))),
        }
    }
}

/// Limiting `ln C` from the fundamental tone alone with `Γ² → 1`.
pub fn asymptotic_ln_contrast(
    channel: CouplingChannel,
    regime: Regime,
    p: &SplitProtocol,
    material: &MaterialModel,
    c: &PhysicalConstants,
    temperature: f64,
) -> Result<f64> {
    let w0 = material.fundamental_tone(p.mass())?;
    let ta2 = p.tau_a() * p.tau_a();
    let dx = p.delta_x_max();
    let neg = match (channel, regime) {
        (CouplingChannel::SpinMagnetic, Regime::HighT) => {
            2.0 * c.k_b * temperature / (c.hbar * c.hbar) * p.mass() * dx * dx
                / (ta2 * ta2 * w0.powi(4))
        }
        (CouplingChannel::SpinMagnetic, Regime::LowT) => {
            p.mass() * dx * dx / (c.hbar * ta2 * ta2 * w0.powi(3))
        }
        (CouplingChannel::Diamagnetic(_), Regime::HighT) => {
            // (k_B T χ² / 8ħ²μ₀²μ⁴) M⁵ ΔX⁶ / (τ_a¹² ω₀⁸)
            dia_coefficient(p, material, c) * 2.0 * c.k_b * temperature / c.hbar / w0.powi(8)
        }
        (CouplingChannel::Diamagnetic(_), Regime::LowT) => {
            dia_coefficient(p, material, c) / w0.powi(7)
        }
        (other, _) => {
            return domain(format!("no asymptotic form for channel {other}"));
        }
    };
    Ok(-neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::relative_error;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gamma_examples() {
        assert_relative_eq!(gamma(2.0 * PI, 0.25, 0.0), -2.0, max_relative = 1e-15);
        let (ta, tf) = (0.3, 0.2);
        let w = 1e-3;
        let lead = -w * w * w * ta * ta * (ta + tf);
        assert_relative_eq!(gamma(w, ta, tf), lead, max_relative = 1e-5);
        for i in 0..200 {
            let w = 0.37 * i as f64 + 0.01;
            let g = gamma(w, ta, tf);
            assert!(g.abs() <= 4.0);
            assert!((g - gamma_three_sine(w, ta, tf)).abs() < 1e-14);
        }
    }

    #[test]
    fn transfer_scaling() {
        let c = PhysicalConstants::default();
        let m = MaterialModel::diamond();
        let p = SplitProtocol::from_target(1e-14, 1e-5, 1.0, 0.2).unwrap();
        let p4 = SplitProtocol::from_target(1e-14, 4e-5, 1.0, 0.2).unwrap();
        let w = 3.9e10;
        assert_relative_eq!(
            transfer_spin_sq(&p4, w),
            16.0 * transfer_spin_sq(&p, w),
            max_relative = 1e-14
        );
        let zero = SplitProtocol::from_target(1e-14, 0.0, 1.0, 0.2).unwrap();
        assert_eq!(transfer_spin_sq(&zero, w), 0.0);
        assert_eq!(transfer_dia_sq(&zero, &m, &c, w), 0.0);
        let ratio = transfer_dia_sq(&p, &m, &c, w) / transfer_spin_sq(&p, w);
        let mm = p.mass();
        let dx = p.delta_x_max();
        let expected = mm.powi(4) * m.susceptibility.powi(2) * dx.powi(4)
            / (16.0 * c.mu_0.powi(2) * p.mu().powi(4) * p.tau_a().powi(8) * w.powi(4));
        assert_relative_eq!(ratio, expected, max_relative = 1e-13);
    }

    #[test]
    fn mode_contrast_limits() {
        let c = PhysicalConstants::default();
        assert_eq!(mode_ln_contrast(0.0, 1e10, 300.0, &c).unwrap(), 0.0);
        let t = 1e-30;
        assert_eq!(
            mode_ln_contrast(t, 1e10, 0.0, &c).unwrap(),
            -t / (4.0 * c.hbar * 1e10)
        );
        let hot = mode_ln_contrast(t, 1e10, 1e9, &c).unwrap();
        let warm = mode_ln_contrast(t, 1e10, 1e3, &c).unwrap();
        assert!(hot < warm * 1e5);
        assert!(mode_ln_contrast(-1.0, 1e10, 1.0, &c).is_err());
    }

    #[test]
    fn closed_forms_equal_pipeline_per_mode() {
        let c = PhysicalConstants::default();
        let m = MaterialModel::diamond();
        let p = SplitProtocol::from_target(1e-14, 1e-4, 1.0, 0.0).unwrap();
        let opts = ContrastOptions {
            truncation: Truncation::Fixed { modes: 50 },
            ..Default::default()
        };
        let s = ln_contrast_spin(&p, &m, &c, 4.0, &opts).unwrap();
        let d = ln_contrast_dia(&p, &m, &c, 4.0, &opts).unwrap();
        for (ms, md) in s.per_mode.iter().zip(&d.per_mode) {
            let ps = mode_ln_contrast(transfer_spin_sq(&p, ms.omega), ms.omega, 4.0, &c).unwrap();
            let pd =
                mode_ln_contrast(transfer_dia_sq(&p, &m, &c, md.omega), md.omega, 4.0, &c).unwrap();
            assert!(relative_error(ms.ln_c, ps) < 1e-12);
            assert!(relative_error(md.ln_c, pd) < 1e-12);
        }
    }

    #[test]
    fn zero_separation_is_perfect_contrast() {
        let c = PhysicalConstants::default();
        let m = MaterialModel::diamond();
        let p = SplitProtocol::from_target(1e-14, 0.0, 1.0, 0.0).unwrap();
        for r in [
            ln_contrast_spin(&p, &m, &c, 300.0, &Default::default()).unwrap(),
            ln_contrast_dia(&p, &m, &c, 300.0, &Default::default()).unwrap(),
            ln_contrast_induced_dipole(&p, &m, &c, 300.0, 30.0, &Default::default()).unwrap(),
        ] {
            assert_eq!(r.contrast, 1.0);
            assert_eq!(r.ln_contrast_total, 0.0);
        }
    }

    #[test]
    fn dipole_without_gradient_is_lossless() {
        let c = PhysicalConstants::default();
        let m = MaterialModel::diamond();
        let p = SplitProtocol::from_target(1e-14, 1e-4, 1.0, 0.0).unwrap();
        let r = ln_contrast_induced_dipole(&p, &m, &c, 4.0, 0.0, &Default::default()).unwrap();
        assert_eq!(r.contrast, 1.0);
    }

    #[test]
    fn report_totals_and_sign() {
        let c = PhysicalConstants::default();
        let m = MaterialModel::diamond();
        let p = SplitProtocol::from_target(1e-16, 1e-5, 0.5, 0.1).unwrap();
        let r = ln_contrast_spin(&p, &m, &c, 300.0, &Default::default()).unwrap();
        assert!(r.per_mode.iter().all(|q| q.ln_c <= 0.0));
        assert!(r.contrast > 0.0 && r.contrast <= 1.0);
        let s: NeumaierSum = r.per_mode.iter().map(|q| q.ln_c).collect();
        assert!(relative_error(s.value(), r.ln_contrast_total) < 1e-14);
        let d = ln_contrast_dia(&p, &m, &c, 300.0, &Default::default()).unwrap();
        assert_eq!(d.fidelity_flag, Fidelity::FlightApproximate);
        assert!(d.converged);
        let both = combine_reports(&[r.clone(), d.clone()]);
        assert_relative_eq!(
            both.ln_contrast_total,
            r.ln_contrast_total + d.ln_contrast_total,
            max_relative = 1e-15
        );
    }

    #[test]
    fn unknown_regime() {
        assert!("medium".parse::<Regime>().is_err());
        assert_eq!("highT".parse::<Regime>().unwrap(), Regime::HighT);
    }

    #[test]
    fn spectrum_grid_must_increase() {
        let c = PhysicalConstants::default();
        let m = MaterialModel::diamond();
        let p = SplitProtocol::from_target(1e-14, 1e-4, 1.0, 0.0).unwrap();
        assert!(transfer_spectrum(CouplingChannel::SpinMagnetic, &p, &m, &c, &[2.0, 1.0]).is_err());
        let s =
            transfer_spectrum(CouplingChannel::SpinMagnetic, &p, &m, &c, &[1e10, 2e10]).unwrap();
        assert!(s.values.iter().all(|v| *v >= 0.0));
    }
}
