//! Phonon-induced contrast loss of a nanodiamond Stern-Gerlach interferometer.
//!
//! The chain of modules mirrors the physics: [`materials`] gives the mode
//! ladder, [`protocol`] the gradient schedule and arm trajectories,
//! [`forces`] the per-mode drive, [`dynamics`] the driven mode response and
//! [`contrast`] the closed-form transfer functions and mode sums.

pub mod contrast;
pub mod dynamics;
pub mod error;
pub mod forces;
pub mod materials;
pub mod numerics;
pub mod protocol;

pub use contrast::{ContrastOptions, ContrastReport, GammaTreatment};
pub use error::{Error, Result};
pub use forces::{mode_force, CouplingChannel, DiaForm, ModeForce};
pub use materials::{MaterialModel, ModeLadder, PhysicalConstants, Truncation};
pub use protocol::{Arm, Origin, SplitProtocol};
