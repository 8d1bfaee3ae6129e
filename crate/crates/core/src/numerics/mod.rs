//! Numerical building blocks shared by the physics modules.

pub mod dd;
pub mod knots;
pub mod quadrature;
pub mod special;

pub use dd::{Angle, Dd};
pub use knots::{Knot, KnotSeries};
pub use quadrature::{GaussLegendre, NeumaierSum};
pub use special::{coth, relative_error};
