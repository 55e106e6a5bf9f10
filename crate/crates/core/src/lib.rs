#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x < y)` deliberately rejects NaN
//! Kinematic transformation groups: block-form space-time maps, the special
//! one-directional families and their velocity-addition laws, the
//! Galileo/Lorentz selection test, and synchrony-shear families that keep the
//! two-way speed of light isotropic.

pub mod classic;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod format;
pub mod isotropy;
pub mod reichenbach;
pub mod selftest;
pub mod spacetime;
pub mod special;
pub mod sweep;
pub mod tolerance;

pub use error::{Error, Result};
pub use spacetime::{AffineMap4, LinearMap4, Rotation3, SpatialVector, UniformWorldline};
pub use special::{Interval, SpecialParams};
