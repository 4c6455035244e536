//! Float geometry of `M = G/K` through a matrix realization.

pub mod checks;
pub mod dd;
pub mod expm;
pub mod immersion;
pub mod space;

pub use immersion::{Axis, CurvatureReport, ImmersionSpec, MeanCurvature, Surface};
pub use space::{InvariantReport, SpacePoint, SymmetricSpace};
