//! Forces on the diamond and their projection onto a phonon mode.
//!
//! Every mode sees the same drive because the mode eigenvector is taken as
//! one on every atom, so `f_q(t) = Σ_i F_i(t) / √M` for all `q`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::materials::{atom_count, MaterialModel, PhysicalConstants};
use crate::numerics::{Knot, KnotSeries};
use crate::protocol::{Arm, Origin, SplitProtocol};

/// How the diamagnetic term treats the free-flight window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiaForm {
    /// `b(t)^2`, which vanishes while the gradient is off.
    #[default]
    Literal,
    /// `eta_b^2` held across the whole run.
    HeldGradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingChannel {
    SpinMagnetic,
    Diamagnetic(DiaForm),
    /// Polarizable diamond in `E(X) = E_0 + eta_e X`.
    InducedDipole {
        e0: f64,
        eta_e: f64,
    },
    /// Permanent dipole `d_0` in a linear field of gradient `eta_e`.
    IntrinsicDipole {
        d0: f64,
        eta_e: f64,
    },
}

impl CouplingChannel {
    pub fn label(&self) -> &'static str {
        match self {
            CouplingChannel::SpinMagnetic => "spin",
            CouplingChannel::Diamagnetic(_) => "dia",
            CouplingChannel::InducedDipole { .. } => "induced_dipole",
            CouplingChannel::IntrinsicDipole { .. } => "intrinsic_dipole",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            CouplingChannel::SpinMagnetic | CouplingChannel::Diamagnetic(_) => true,
            CouplingChannel::InducedDipole { e0, eta_e } => e0.is_finite() && eta_e.is_finite(),
            CouplingChannel::IntrinsicDipole { d0, eta_e } => d0.is_finite() && eta_e.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            domain("channel parameters must be finite")
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ChannelDoc = serde_json::from_str(s)?;
        doc.build()
    }

    pub fn to_doc(&self) -> ChannelDoc {
        let mut doc = ChannelDoc {
            kind: self.label().to_string(),
            e0: None,
            eta_e: None,
            d0: None,
        };
        match *self {
            CouplingChannel::InducedDipole { e0, eta_e } => {
                doc.e0 = Some(e0);
                doc.eta_e = Some(eta_e);
            }
            CouplingChannel::IntrinsicDipole { d0, eta_e } => {
                doc.d0 = Some(d0);
                doc.eta_e = Some(eta_e);
            }
            _ => {}
        }
        doc
    }
}

impl fmt::Display for CouplingChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Channel document `{kind, E_0?, eta_e?, d_0?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub kind: String,
    #[serde(rename = "E_0", default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_e: Option<f64>,
    #[serde(rename = "d_0", default, skip_serializing_if = "Option::is_none")]
    pub d0: Option<f64>,
}

impl ChannelDoc {
    pub fn build(&self) -> Result<CouplingChannel> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("channel '{}' requires {name}", self.kind)))
        };
        let stray = |v: Option<f64>, name: &str| match v {
            Some(_) => Err(Error::Parse(format!(
                "channel '{}' does not take {name}",
                self.kind
            ))),
            None => Ok(()),
        };
        let ch = match self.kind.as_str() {
            "spin" | "dia" => {
                stray(self.e0, "E_0")?;
                stray(self.eta_e, "eta_e")?;
                stray(self.d0, "d_0")?;
                if self.kind == "spin" {
                    CouplingChannel::SpinMagnetic
                } else {
                    CouplingChannel::Diamagnetic(DiaForm::Literal)
                }
            }
            "induced_dipole" | "dipole" => {
                stray(self.d0, "d_0")?;
                CouplingChannel::InducedDipole {
                    e0: self.e0.unwrap_or(0.0),
                    eta_e: need(self.eta_e, "eta_e")?,
                }
            }
            "intrinsic_dipole" => {
                stray(self.e0, "E_0")?;
                CouplingChannel::IntrinsicDipole {
                    d0: need(self.d0, "d_0")?,
                    eta_e: self.eta_e.unwrap_or(0.0),
                }
            }
            other => return Err(Error::Parse(format!("unknown channel kind '{other}'"))),
        };
        ch.validate()?;
        Ok(ch)
    }
}

/// `F_s = S mu b(t)`.
pub fn spin_force(p: &SplitProtocol, arm: Arm, t: f64) -> f64 {
    arm.sign() * p.mu() * p.gradient_at(t)
}

/// Net diamagnetic force on the diamond, `(chi M / mu_0)(B_0 b + b^2 X_c)`.
pub fn diamagnetic_force_total(
    p: &SplitProtocol,
    material: &MaterialModel,
    constants: &PhysicalConstants,
    arm: Arm,
    t: f64,
) -> f64 {
    let b = p.gradient_at(t);
    let x = p.kinematics_at(arm, t).position;
    material.susceptibility * p.mass() / constants.mu_0 * (p.b0() * b + b * b * x)
}

/// Uniform share of `total` carried by each of `n_atoms` atoms.
pub fn per_atom_partition(total: f64, n_atoms: usize) -> Result<f64> {
    if n_atoms == 0 {
        return domain("at least one atom is required");
    }
    Ok(total / n_atoms as f64)
}

/// Clausius-Mossotti polarizability per atom.
pub fn polarizability(
    eps_r: f64,
    volume: f64,
    n_atoms: usize,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(eps_r > 1.0) {
        return domain(format!("relative permittivity must exceed 1, got {eps_r}"));
    }
    if !(volume > 0.0) || n_atoms == 0 {
        return domain("volume and atom count must be positive");
    }
    Ok(3.0 * constants.eps_0 * volume / n_atoms as f64 * (eps_r - 1.0) / (eps_r + 2.0))
}

/// `Σ_i α_i`, which depends only on the volume and ε_r.
fn total_polarizability(eps_r: f64, volume: f64, constants: &PhysicalConstants) -> f64 {
    3.0 * constants.eps_0 * volume * (eps_r - 1.0) / (eps_r + 2.0)
}

/// Induced-dipole force on one atom, `(2α/ε_r)(E_0 η_e + η_e^2 X)`, during the run.
pub fn induced_dipole_force(
    p: &SplitProtocol,
    material: &MaterialModel,
    constants: &PhysicalConstants,
    arm: Arm,
    t: f64,
    e0: f64,
    eta_e: f64,
) -> Result<f64> {
    let n = atom_count(p.mass());
    let alpha = polarizability(material.dielectric, material.volume(p.mass()), n, constants)?;
    Ok(dipole_force_with(alpha, p, material, arm, t, e0, eta_e))
}

/// Summed over all atoms.
pub fn induced_dipole_force_total(
    p: &SplitProtocol,
    material: &MaterialModel,
    constants: &PhysicalConstants,
    arm: Arm,
    t: f64,
    e0: f64,
    eta_e: f64,
) -> Result<f64> {
    if !(material.dielectric > 1.0) {
        return domain("relative permittivity must exceed 1");
    }
    let alpha = total_polarizability(material.dielectric, material.volume(p.mass()), constants);
    Ok(dipole_force_with(alpha, p, material, arm, t, e0, eta_e))
}

fn dipole_force_with(
    alpha: f64,
    p: &SplitProtocol,
    material: &MaterialModel,
    arm: Arm,
    t: f64,
    e0: f64,
    eta_e: f64,
) -> f64 {
    let k = p.kinematics_at(arm, t);
    if !k.in_run {
        return 0.0;
    }
    2.0 * alpha / material.dielectric * (e0 * eta_e + eta_e * eta_e * k.position)
}

/// `dE/dX` at a position, for permanent dipoles in non-linear fields.
pub type FieldGradient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Per-mode drive `f_q(t)` on each arm and its arm difference.
#[derive(Clone)]
pub struct ModeForce {
    channel: CouplingChannel,
    protocol: SplitProtocol,
    material: MaterialModel,
    constants: PhysicalConstants,
    field_gradient: Option<FieldGradient>,
}

impl fmt::Debug for ModeForce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeForce")
            .field("channel", &self.channel)
            .field("protocol", &self.protocol)
            .field("material", &self.material.name)
            .field("custom_field", &self.field_gradient.is_some())
            .finish()
    }
}

/// Build the drive of `channel` under protocol `p`.
pub fn mode_force(
    channel: CouplingChannel,
    p: &SplitProtocol,
    material: &MaterialModel,
    constants: &PhysicalConstants,
) -> Result<ModeForce> {
    channel.validate()?;
    material.validate()?;
    Ok(ModeForce {
        channel,
        protocol: *p,
        material: material.clone(),
        constants: *constants,
        field_gradient: None,
    })
}

impl ModeForce {
    /// Permanent dipole `d0` in a field whose gradient at `X` is `field_gradient(X)`.
    pub fn intrinsic_dipole_in_field(
        d0: f64,
        field_gradient: FieldGradient,
        p: &SplitProtocol,
        material: &MaterialModel,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let mut f = mode_force(
            CouplingChannel::IntrinsicDipole { d0, eta_e: 0.0 },
            p,
            material,
            constants,
        )?;
        f.field_gradient = Some(field_gradient);
        Ok(f)
    }

    pub fn channel(&self) -> CouplingChannel {
        self.channel
    }

    pub fn protocol(&self) -> &SplitProtocol {
        &self.protocol
    }

    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Total force on the diamond in arm `arm` at time `t` (N).
    pub fn total_force(&self, arm: Arm, t: f64) -> f64 {
        let p = &self.protocol;
        match self.channel {
            CouplingChannel::SpinMagnetic => spin_force(p, arm, t),
            CouplingChannel::Diamagnetic(form) => {
                let b = p.gradient_at(t);
                let b2 = match form {
                    DiaForm::Literal => b * b,
                    DiaForm::HeldGradient if p.kinematics_at(arm, t).in_run => {
                        p.eta_b() * p.eta_b()
                    }
                    DiaForm::HeldGradient => 0.0,
                };
                let x = p.kinematics_at(arm, t).position;
                self.material.susceptibility * p.mass() / self.constants.mu_0
                    * (p.b0() * b + b2 * x)
            }
            CouplingChannel::InducedDipole { e0, eta_e } => {
                let alpha = total_polarizability(
                    self.material.dielectric,
                    self.material.volume(p.mass()),
                    &self.constants,
                );
                dipole_force_with(alpha, p, &self.material, arm, t, e0, eta_e)
            }
            CouplingChannel::IntrinsicDipole { d0, eta_e } => {
                let k = p.kinematics_at(arm, t);
                if !k.in_run {
                    return 0.0;
                }
                match &self.field_gradient {
                    Some(g) => d0 * g(k.position),
                    None => d0 * eta_e,
                }
            }
        }
    }

    /// `f_q(t)` on one arm.
    pub fn arm(&self, arm: Arm, t: f64) -> f64 {
        self.total_force(arm, t) / self.protocol.mass().sqrt()
    }

    /// `Δf_q(t) = f_q^R(t) - f_q^L(t)`.
    pub fn delta(&self, t: f64) -> f64 {
        self.arm(Arm::Right, t) - self.arm(Arm::Left, t)
    }

    /// Same as [`ModeForce::delta`] with `t` measured from switch-on.
    pub fn delta_local(&self, t: f64) -> f64 {
        self.delta(t + self.protocol.start())
    }

    pub fn arm_local(&self, arm: Arm, t: f64) -> f64 {
        self.arm(arm, t + self.protocol.start())
    }

    /// Exact piecewise-polynomial form of the arm drive; `None` for custom fields.
    pub fn arm_knots(&self, arm: Arm, origin: Origin) -> Option<KnotSeries> {
        if self.field_gradient.is_some() {
            return None;
        }
        let p = &self.protocol;
        let rt = p.mass().sqrt();
        let s = arm.sign();
        let series = match self.channel {
            CouplingChannel::SpinMagnetic => {
                p.gradient_shape(origin).scaled(s * p.mu() * p.eta_b() / rt)
            }
            CouplingChannel::Diamagnetic(form) => {
                let c = self.material.susceptibility * p.mass() / self.constants.mu_0 / rt;
                let eta2 = p.eta_b() * p.eta_b();
                let x = match form {
                    DiaForm::Literal => p.windowed_position_knots(origin),
                    DiaForm::HeldGradient => p.position_knots(origin),
                };
                let b = p.gradient_shape(origin);
                KnotSeries::combine(&[(&b, c * p.b0() * p.eta_b()), (&x, c * eta2 * s)])
            }
            CouplingChannel::InducedDipole { e0, eta_e } => {
                let k =
                    2.0 * total_polarizability(
                        self.material.dielectric,
                        self.material.volume(p.mass()),
                        &self.constants,
                    ) / self.material.dielectric
                        / rt;
                let w = run_window(p, origin);
                let x = p.position_knots(origin);
                KnotSeries::combine(&[(&w, k * e0 * eta_e), (&x, k * eta_e * eta_e * s)])
            }
            CouplingChannel::IntrinsicDipole { d0, eta_e } => {
                run_window(p, origin).scaled(d0 * eta_e / rt)
            }
        };
        Some(series)
    }

    /// Exact form of `Δf_q(t)`; `None` for custom fields.
    pub fn delta_knots(&self, origin: Origin) -> Option<KnotSeries> {
        let r = self.arm_knots(Arm::Right, origin)?;
        let l = self.arm_knots(Arm::Left, origin)?;
        Some(KnotSeries::combine(&[(&r, 1.0), (&l, -1.0)]))
    }
}

fn run_window(p: &SplitProtocol, origin: Origin) -> KnotSeries {
    let ts = p.breakpoints_dd(origin);
    KnotSeries::merged(
        vec![
            Knot::new(ts[0], [1.0, 0.0, 0.0]),
            Knot::new(ts[5], [-1.0, 0.0, 0.0]),
        ],
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (SplitProtocol, MaterialModel, PhysicalConstants) {
        let p = SplitProtocol::new(0.2, 0.05, 30.0, 0.7, 1e-14).unwrap();
        (p, MaterialModel::diamond(), PhysicalConstants::default())
    }

    #[test]
    fn spin_arms_opposite() {
        let (p, ..) = setup();
        let t = p.start() + 0.01;
        let r = spin_force(&p, Arm::Right, t);
        assert_eq!(r, p.mu() * p.eta_b());
        assert_eq!(spin_force(&p, Arm::Left, t), -r);
        assert_eq!(spin_force(&p, Arm::Right, 0.0), 0.0);
    }

    #[test]
    fn dia_difference_drops_b0() {
        let (p, m, c) = setup();
        let t = p.start() + 0.15;
        let fr = diamagnetic_force_total(&p, &m, &c, Arm::Right, t);
        let fl = diamagnetic_force_total(&p, &m, &c, Arm::Left, t);
        let b = p.gradient_at(t);
        let expected = m.susceptibility * p.mass() / c.mu_0 * b * b * p.separation_at(t);
        assert_relative_eq!(fr - fl, expected, max_relative = 1e-12);
        assert_eq!(diamagnetic_force_total(&p, &m, &c, Arm::Right, 0.0), 0.0);
        let p0 = p.with_b0(0.0);
        assert_eq!(
            diamagnetic_force_total(&p0, &m, &c, Arm::Right, p0.start()),
            0.0
        );
    }

    #[test]
    fn partition_sums_back() {
        assert_eq!(per_atom_partition(1.0, 4).unwrap(), 0.25);
        assert_eq!(per_atom_partition(3.7, 1).unwrap(), 3.7);
        assert!(per_atom_partition(1.0, 0).is_err());
        let f = 2.3e-12;
        let n = 1000;
        let each = per_atom_partition(f, n).unwrap();
        let s: crate::numerics::NeumaierSum = std::iter::repeat(each).take(n).collect();
        assert!((s.value() - f).abs() <= 1e-15 * f);
    }

    #[test]
    fn clausius_mossotti() {
        let c = PhysicalConstants::default();
        assert_relative_eq!(4.7 / 7.7, 0.6104, max_relative = 1e-3);
        let a = polarizability(5.7, 1e-18, 10, &c).unwrap();
        assert_relative_eq!(a, 3.0 * c.eps_0 * 1e-19 * 4.7 / 7.7, max_relative = 1e-15);
        assert!(polarizability(1.0 + 1e-12, 1e-18, 10, &c).unwrap() < 1e-40);
        assert!(polarizability(1.0, 1e-18, 10, &c).is_err());
        let a2 = polarizability(5.7, 2e-18, 10, &c).unwrap();
        assert_relative_eq!(a2, 2.0 * a, max_relative = 1e-15);
    }

    #[test]
    fn knots_match_direct_evaluation() {
        let (p, m, c) = setup();
        let channels = [
            CouplingChannel::SpinMagnetic,
            CouplingChannel::Diamagnetic(DiaForm::Literal),
            CouplingChannel::Diamagnetic(DiaForm::HeldGradient),
            CouplingChannel::InducedDipole {
                e0: 3.0,
                eta_e: 7.0,
            },
            CouplingChannel::IntrinsicDipole {
                d0: 1e-29,
                eta_e: 2.0,
            },
        ];
        for ch in channels {
            let f = mode_force(ch, &p, &m, &c).unwrap();
            let kr = f.arm_knots(Arm::Right, Origin::MaxSeparation).unwrap();
            let kd = f.delta_knots(Origin::MaxSeparation).unwrap();
            let scale = (0..=100)
                .map(|i| {
                    f.arm(Arm::Right, p.start() + p.delta_t() * i as f64 / 100.0)
                        .abs()
                })
                .fold(0.0, f64::max)
                .max(1e-300);
            for i in 0..400 {
                let t = p.start() + p.delta_t() * (i as f64 + 0.37) / 400.0;
                assert!(
                    (kr.value(t) - f.arm(Arm::Right, t)).abs() <= 1e-12 * scale,
                    "{ch} t={t}"
                );
                assert!(
                    (kd.value(t) - f.delta(t)).abs() <= 2e-12 * scale,
                    "{ch} t={t}"
                );
            }
        }
    }

    #[test]
    fn linear_field_intrinsic_dipole_has_no_difference() {
        let (p, m, c) = setup();
        let f = mode_force(
            CouplingChannel::IntrinsicDipole {
                d0: 1e-29,
                eta_e: 50.0,
            },
            &p,
            &m,
            &c,
        )
        .unwrap();
        for i in 0..50 {
            assert_eq!(f.delta(p.start() + 0.01 * i as f64), 0.0);
        }
        assert!(f.delta_knots(Origin::Start).unwrap().is_zero());
    }

    #[test]
    fn channel_docs() {
        assert_eq!(
            CouplingChannel::from_json(r#"{"kind":"spin"}"#).unwrap(),
            CouplingChannel::SpinMagnetic
        );
        assert_eq!(
            CouplingChannel::from_json(r#"{"kind":"induced_dipole","E_0":1,"eta_e":30}"#).unwrap(),
            CouplingChannel::InducedDipole {
                e0: 1.0,
                eta_e: 30.0
            }
        );
        assert!(CouplingChannel::from_json(r#"{"kind":"induced_dipole"}"#).is_err());
        assert!(CouplingChannel::from_json(r#"{"kind":"spin","d_0":1}"#).is_err());
        assert!(CouplingChannel::from_json(r#"{"kind":"spin","x":1}"#).is_err());
        assert!(CouplingChannel::from_json(r#"{"kind":"gravity"}"#).is_err());
        let ch = CouplingChannel::IntrinsicDipole {
            d0: 2e-29,
            eta_e: 0.0,
        };
        let doc = serde_json::to_string(&ch.to_doc()).unwrap();
        assert_eq!(CouplingChannel::from_json(&doc).unwrap(), ch);
    }
}
