//! Step-gradient Stern-Gerlach schedule and the two arms' centre-of-mass motion.
//!
//! Times are measured from the instant of maximum separation unless a method
//! says otherwise, so the run covers `[t1, t6] = [-(2τa + τf), 2τa + τf]`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::materials::PhysicalConstants;
use crate::numerics::{Dd, Knot, KnotSeries};

/// Interferometer arm, carrying the spin projection `S = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Left,
    Right,
}

impl Arm {
    pub const BOTH: [Arm; 2] = [Arm::Left, Arm::Right];

    pub fn sign(self) -> f64 {
        match self {
            Arm::Left => -1.0,
            Arm::Right => 1.0,
        }
    }
}

/// Where `t = 0` sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Maximum separation, the midpoint of the run.
    MaxSeparation,
    /// Gradient switch-on, `t1`.
    Start,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitProtocol {
    tau_a: f64,
    tau_f: f64,
    eta_b: f64,
    b0: f64,
    mass: f64,
    mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
    /// False when `t` lies outside `[t1, t6]`; all fields are then zero.
    pub in_run: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientBudget {
    pub pass: bool,
    /// `eta_b / cap`
    pub ratio: f64,
}

impl SplitProtocol {
    /// Build from the schedule parameters, with the default NV moment.
    pub fn new(tau_a: f64, tau_f: f64, eta_b: f64, b0: f64, mass: f64) -> Result<Self> {
        Self::with_moment(
            tau_a,
            tau_f,
            eta_b,
            b0,
            mass,
            PhysicalConstants::default().mu(),
        )
    }

    pub fn with_moment(
        tau_a: f64,
        tau_f: f64,
        eta_b: f64,
        b0: f64,
        mass: f64,
        mu: f64,
    ) -> Result<Self> {
        if ![tau_a, tau_f, eta_b, b0, mass, mu]
            .iter()
            .all(|v| v.is_finite())
        {
            return domain("protocol parameters must be finite");
        }
        if !(tau_a > 0.0) {
            return domain(format!("tau_a must be positive, got {tau_a:e}"));
        }
        if tau_f < 0.0 || eta_b < 0.0 {
            return domain("tau_f and eta_b must be non-negative");
        }
        if !(mass > 0.0) || !(mu > 0.0) {
            return domain("mass and magnetic moment must be positive");
        }
        Ok(SplitProtocol {
            tau_a,
            tau_f,
            eta_b,
            b0,
            mass,
            mu,
        })
    }

    /// Inverse design: the gradient and timings that reach `delta_x_max` at
    /// the midpoint of a run lasting `delta_t`, a fraction of which is free flight.
    pub fn from_target(
        mass: f64,
        delta_x_max: f64,
        delta_t: f64,
        flight_fraction: f64,
    ) -> Result<Self> {
        Self::from_target_with_moment(
            mass,
            delta_x_max,
            delta_t,
            flight_fraction,
            PhysicalConstants::default().mu(),
        )
    }

    pub fn from_target_with_moment(
        mass: f64,
        delta_x_max: f64,
        delta_t: f64,
        flight_fraction: f64,
        mu: f64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&flight_fraction) {
            return domain(format!(
                "flight fraction must lie in [0, 1), got {flight_fraction}"
            ));
        }
        if !(delta_t > 0.0) || !delta_t.is_finite() {
            return domain(format!("run duration must be positive, got {delta_t:e}"));
        }
        if !(delta_x_max >= 0.0) || !delta_x_max.is_finite() {
            return domain(format!(
                "target separation must be non-negative, got {delta_x_max:e}"
            ));
        }
        if !(mass > 0.0) || !(mu > 0.0) {
            return domain("mass and magnetic moment must be positive");
        }
        let tau_f = 0.5 * flight_fraction * delta_t;
        let tau_a = 0.25 * (delta_t - 2.0 * tau_f);
        let eta_b = mass * delta_x_max / (2.0 * mu * tau_a * tau_a);
        Self::with_moment(tau_a, tau_f, eta_b, 0.0, mass, mu)
    }

    pub fn tau_a(&self) -> f64 {
        self.tau_a
    }

    pub fn tau_f(&self) -> f64 {
        self.tau_f
    }

    pub fn eta_b(&self) -> f64 {
        self.eta_b
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_b0(mut self, b0: f64) -> Self {
        self.b0 = b0;
        self
    }

    /// Magnitude of the arm acceleration, `mu eta_b / M`.
    pub fn accel(&self) -> f64 {
        self.mu * self.eta_b / self.mass
    }

    /// `4 tau_a + 2 tau_f`
    pub fn delta_t(&self) -> f64 {
        4.0 * self.tau_a + 2.0 * self.tau_f
    }

    /// `2 a tau_a^2`
    pub fn delta_x_max(&self) -> f64 {
        2.0 * self.accel() * self.tau_a * self.tau_a
    }

    /// Fraction of the run spent in free flight.
    pub fn flight_fraction(&self) -> f64 {
        2.0 * self.tau_f / self.delta_t()
    }

    /// Exact switching times `t1..t6`.
    pub fn breakpoints_dd(&self, origin: Origin) -> [Dd; 6] {
        let (ta, tf) = (self.tau_a, self.tau_f);
        match origin {
            Origin::MaxSeparation => {
                let t5 = Dd::sum(ta, tf);
                let t6 = Dd::sum(2.0 * ta, tf);
                [-t6, -t5, Dd::new(-tf), Dd::new(tf), t5, t6]
            }
            Origin::Start => [
                Dd::ZERO,
                Dd::new(ta),
                Dd::new(2.0 * ta),
                Dd::sum(2.0 * ta, 2.0 * tf),
                Dd::sum(2.0 * ta, 2.0 * tf) + ta,
                Dd::sum(4.0 * ta, 2.0 * tf),
            ],
        }
    }

    pub fn breakpoints(&self) -> [f64; 6] {
        self.breakpoints_dd(Origin::MaxSeparation)
            .map(|t| t.to_f64())
    }

    /// `t1`, the instant the gradient switches on.
    pub fn start(&self) -> f64 {
        -(2.0 * self.tau_a + self.tau_f)
    }

    pub fn end(&self) -> f64 {
        2.0 * self.tau_a + self.tau_f
    }

    /// Branch index 0..5 for `t` in the run, right-continuous except at `t6`.
    fn segment(&self, t: f64) -> Option<usize> {
        let [t1, t2, t3, t4, t5, t6] = self.breakpoints();
        if !(t >= t1 && t <= t6) {
            return None;
        }
        Some(if t < t2 {
            0
        } else if t < t3 {
            1
        } else if t < t4 {
            2
        } else if t < t5 {
            3
        } else {
            4
        })
    }

    /// Gradient `b(t)`; zero outside the run.
    pub fn gradient_at(&self, t: f64) -> f64 {
        match self.segment(t) {
            Some(0) | Some(4) => self.eta_b,
            Some(1) | Some(3) => -self.eta_b,
            _ => 0.0,
        }
    }

    /// Field magnitude `B_0 + b(t) X` at a position `x`.
    pub fn field_at(&self, t: f64, x: f64) -> f64 {
        self.b0 + self.gradient_at(t) * x
    }

    pub fn kinematics_at(&self, arm: Arm, t: f64) -> Kinematics {
        let Some(seg) = self.segment(t) else {
            return Kinematics {
                position: 0.0,
                velocity: 0.0,
                acceleration: 0.0,
                in_run: false,
            };
        };
        let a = self.accel();
        let (ta, tf) = (self.tau_a, self.tau_f);
        let t6 = self.end();
        let (x, v, acc) = match seg {
            0 => {
                let s = t - self.start();
                (0.5 * a * s * s, a * s, a)
            }
            1 => {
                let s = t + tf;
                (0.5 * a * (2.0 * ta * ta - s * s), -a * s, -a)
            }
            2 => (a * ta * ta, 0.0, 0.0),
            3 => {
                let s = t - tf;
                (0.5 * a * (2.0 * ta * ta - s * s), -a * s, -a)
            }
            _ => {
                let s = t6 - t;
                (0.5 * a * s * s, -a * s, a)
            }
        };
        let sg = arm.sign();
        Kinematics {
            position: sg * x,
            velocity: sg * v,
            acceleration: sg * acc,
            in_run: true,
        }
    }

    /// `X_R(t) - X_L(t)`.
    pub fn separation_at(&self, t: f64) -> f64 {
        2.0 * self.kinematics_at(Arm::Right, t).position
    }

    pub fn check_gradient_budget(&self, cap: f64) -> Result<GradientBudget> {
        if !(cap > 0.0) {
            return domain("gradient cap must be positive");
        }
        Ok(GradientBudget {
            pass: self.eta_b <= cap,
            ratio: self.eta_b / cap,
        })
    }

    /// `b(t) / eta_b` as a closed knot series: a sequence of unit steps.
    pub fn gradient_shape(&self, origin: Origin) -> KnotSeries {
        let ts = self.breakpoints_dd(origin);
        let steps = [1.0, -2.0, 1.0, -1.0, 2.0, -1.0];
        KnotSeries::merged(
            ts.iter()
                .zip(steps)
                .map(|(&t, j)| Knot::new(t, [j, 0.0, 0.0]))
                .collect(),
            true,
        )
    }

    /// `b(t)^2 / eta_b^2`: one on the four acceleration legs, zero in flight.
    pub fn gradient_sq_shape(&self, origin: Origin) -> KnotSeries {
        let ts = self.breakpoints_dd(origin);
        let steps = [1.0, 0.0, -1.0, 1.0, 0.0, -1.0];
        KnotSeries::merged(
            ts.iter()
                .zip(steps)
                .map(|(&t, j)| Knot::new(t, [j, 0.0, 0.0]))
                .collect(),
            true,
        )
    }

    /// Right-arm position `X_R(t)` as a closed knot series.
    pub fn position_knots(&self, origin: Origin) -> KnotSeries {
        let ts = self.breakpoints_dd(origin);
        let a = self.accel();
        let steps = [1.0, -2.0, 1.0, -1.0, 2.0, -1.0];
        KnotSeries::merged(
            ts.iter()
                .zip(steps)
                .map(|(&t, j)| Knot::new(t, [0.0, 0.0, j * a]))
                .collect(),
            true,
        )
    }

    /// Right-arm position with the gradient-squared window applied:
    /// `X_R(t)` on the acceleration legs, zero during free flight.
    pub fn windowed_position_knots(&self, origin: Origin) -> KnotSeries {
        let ts = self.breakpoints_dd(origin);
        let a = self.accel();
        let peak = a * self.tau_a * self.tau_a;
        let knots = vec![
            Knot::new(ts[0], [0.0, 0.0, a]),
            Knot::new(ts[1], [0.0, 0.0, -2.0 * a]),
            // leave the plateau value, return to it at the end of the flight
            Knot::new(ts[2], [-peak, 0.0, a]),
            Knot::new(ts[3], [peak, 0.0, -a]),
            Knot::new(ts[4], [0.0, 0.0, 2.0 * a]),
            Knot::new(ts[5], [0.0, 0.0, -a]),
        ];
        KnotSeries::merged(knots, true)
    }
}

/// Protocol document. Exactly one of the two forms may appear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProtocolDoc {
    Schedule(ScheduleForm),
    Target(TargetForm),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleForm {
    pub tau_a: f64,
    pub tau_f: f64,
    pub eta_b: f64,
    #[serde(rename = "B_0")]
    pub b0: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetForm {
    pub mass: f64,
    pub delta_x_max: f64,
    pub delta_t: f64,
    pub flight_fraction: f64,
}

impl ProtocolDoc {
    pub fn build(&self) -> Result<SplitProtocol> {
        match *self {
            ProtocolDoc::Schedule(s) => SplitProtocol::new(s.tau_a, s.tau_f, s.eta_b, s.b0, s.mass),
            ProtocolDoc::Target(t) => {
                SplitProtocol::from_target(t.mass, t.delta_x_max, t.delta_t, t.flight_fraction)
            }
        }
    }
}

impl From<&SplitProtocol> for ProtocolDoc {
    fn from(p: &SplitProtocol) -> Self {
        ProtocolDoc::Schedule(ScheduleForm {
            tau_a: p.tau_a,
            tau_f: p.tau_f,
            eta_b: p.eta_b,
            b0: p.b0,
            mass: p.mass,
        })
    }
}

impl SplitProtocol {
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ProtocolDoc = serde_json::from_str(s).map_err(|e| {
            Error::Parse(format!(
                "protocol must be exactly one of {{tau_a, tau_f, eta_b, B_0, mass}} or \
                 {{mass, delta_x_max, delta_t, flight_fraction}}: {e}"
            ))
        })?;
        doc.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ProtocolDoc::from(self)).expect("protocol serializes")
    }
}
