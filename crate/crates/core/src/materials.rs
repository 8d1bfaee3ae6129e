//! Physical constants, material presets, diamond geometry and the phonon mode ladder.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::NeumaierSum;

/// Mass of a carbon atom (kg), used only for per-atom reporting.
pub const CARBON_ATOM_MASS: f64 = 1.994e-26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Vacuum permeability (T m/A).
    pub mu_0: f64,
    /// Vacuum permittivity (F/m).
    pub eps_0: f64,
    /// Bohr magneton (J/T).
    pub mu_b: f64,
    pub g_lande: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: 1.054_571_817e-34,
            k_b: 1.380_649e-23,
            mu_0: 1.256_637_062_12e-6,
            eps_0: 8.854_187_812_8e-12,
            mu_b: 9.27e-24,
            g_lande: 2.0,
        }
    }
}

impl PhysicalConstants {
    /// Magnetic moment of the NV spin, `g * mu_b`.
    pub fn mu(&self) -> f64 {
        self.g_lande * self.mu_b
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.hbar,
            self.k_b,
            self.mu_0,
            self.eps_0,
            self.mu_b,
            self.g_lande,
        ];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            domain("physical constants must be finite and positive")
        }
    }
}

/// Bulk properties of the test mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    pub name: String,
    /// kg/m^3
    pub density: f64,
    /// m/s
    pub sound_speed: f64,
    /// Mass susceptibility χ_ρ (m^3/kg), negative for diamagnets.
    pub susceptibility: f64,
    /// Relative permittivity ε_r.
    pub dielectric: f64,
}

impl MaterialModel {
    pub fn diamond() -> Self {
        MaterialModel {
            name: "diamond".into(),
            density: 3.51e3,
            sound_speed: 1.75e4,
            susceptibility: -6.2e-9,
            dielectric: 5.7,
        }
    }

    /// Built-in presets by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "diamond" => Some(Self::diamond()),
            _ => None,
        }
    }

    /// Parse and validate a JSON preset document.
    pub fn from_json(s: &str) -> Result<Self> {
        let m: MaterialModel = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.density,
            self.sound_speed,
            self.susceptibility,
            self.dielectric,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return domain("material properties must be finite");
        }
        if self.density <= 0.0 || self.sound_speed <= 0.0 {
            return domain("density and sound speed must be positive");
        }
        if self.dielectric <= 1.0 {
            return domain("relative permittivity must exceed 1");
        }
        Ok(())
    }

    /// Side of a cube of this material with mass `mass`.
    pub fn cube_side(&self, mass: f64) -> Result<f64> {
        cube_side(mass, self)
    }

    pub fn volume(&self, mass: f64) -> f64 {
        mass / self.density
    }

    /// Fundamental angular frequency of a cube of mass `mass`.
    pub fn fundamental_tone(&self, mass: f64) -> Result<f64> {
        fundamental_tone(self.cube_side(mass)?, self.sound_speed)
    }
}

/// `L = (M / rho)^(1/3)`.
pub fn cube_side(mass: f64, material: &MaterialModel) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return domain(format!("mass must be positive, got {mass:e}"));
    }
    Ok((mass / material.density).cbrt())
}

/// `omega_0 = pi c / L`.
pub fn fundamental_tone(side: f64, sound_speed: f64) -> Result<f64> {
    if !(side > 0.0) || !side.is_finite() {
        return domain(format!("length must be positive, got {side:e}"));
    }
    Ok(PI * sound_speed / side)
}

/// Number of carbon atoms in a diamond of mass `mass`.
pub fn atom_count(mass: f64) -> usize {
    ((mass / CARBON_ATOM_MASS).round() as usize).max(1)
}

/// How many harmonics of the fundamental enter a mode sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Truncation {
    Fixed {
        modes: usize,
    },
    /// Stop once the bound on the remaining tail is below `rel_tol` times the
    /// running sum, or at `max_modes`.
    Adaptive {
        rel_tol: f64,
        max_modes: usize,
    },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Adaptive {
            rel_tol: 1e-12,
            max_modes: 100_000,
        }
    }
}

impl Truncation {
    pub fn max_modes(&self) -> usize {
        match *self {
            Truncation::Fixed { modes } => modes,
            Truncation::Adaptive { max_modes, .. } => max_modes,
        }
    }
}

/// Harmonic ladder `omega_n = n * omega_0`, `n = 1..=count`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLadder {
    omega_0: f64,
    count: usize,
}

impl ModeLadder {
    pub fn new(omega_0: f64, count: usize) -> Result<Self> {
        if !(omega_0 > 0.0) || !omega_0.is_finite() {
            return domain(format!(
                "fundamental frequency must be positive, got {omega_0:e}"
            ));
        }
        if count == 0 {
            return domain("mode ladder needs at least one mode");
        }
        Ok(ModeLadder { omega_0, count })
    }

    pub fn omega_0(&self) -> f64 {
        self.omega_0
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Angular frequency of harmonic `n` (1-based).
    pub fn omega(&self, n: usize) -> f64 {
        n as f64 * self.omega_0
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.count).map(|n| self.omega(n))
    }
}

/// Ladder covering the largest number of modes the policy may use.
pub fn mode_ladder(omega_0: f64, policy: Truncation) -> Result<ModeLadder> {
    ModeLadder::new(omega_0, policy.max_modes())
}

/// Outcome of summing a per-mode quantity over a ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSum {
    /// Per-mode terms, `terms[n - 1]` for harmonic `n`.
    pub terms: Vec<f64>,
    pub total: f64,
    pub converged: bool,
    /// Upper bound on the magnitude of the omitted tail.
    pub tail_bound: f64,
}

impl LadderSum {
    pub fn modes_used(&self) -> usize {
        self.terms.len()
    }
}

/// Sum `term(n, omega_n)` over the ladder. `tail(n)` must bound
/// `Σ_{m > n} |term(m)|`.
pub fn sum_over_ladder<T, B>(
    omega_0: f64,
    policy: Truncation,
    mut term: T,
    mut tail: B,
) -> Result<LadderSum>
where
    T: FnMut(usize, f64) -> f64,
    B: FnMut(usize) -> f64,
{
    let ladder = mode_ladder(omega_0, policy)?;
    let mut acc = NeumaierSum::default();
    let mut terms = Vec::new();
    let (rel_tol, adaptive) = match policy {
        Truncation::Fixed { .. } => (0.0, false),
        Truncation::Adaptive { rel_tol, .. } => {
            if !(rel_tol > 0.0) {
                return domain("adaptive tolerance must be positive");
            }
            (rel_tol, true)
        }
    };
    let mut converged = !adaptive;
    let mut bound = f64::INFINITY;
    for n in 1..=ladder.len() {
        let v = term(n, ladder.omega(n));
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite term at mode {n}")));
        }
        acc.add(v);
        terms.push(v);
        bound = tail(n);
        if adaptive {
            let total = acc.value();
            if bound <= rel_tol * total.abs() || (total == 0.0 && bound == 0.0) {
                converged = true;
                break;
            }
        }
    }
    Ok(LadderSum {
        total: acc.value(),
        terms,
        converged,
        tail_bound: bound,
    })
}

/// `Σ_{m > n} m^{-p} <= n^{1-p} / (p - 1)` for `p > 1`.
pub fn power_tail(n: usize, p: f64) -> f64 {
    (n as f64).powf(1.0 - p) / (p - 1.0)
}
