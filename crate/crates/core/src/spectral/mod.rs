//! Periodic pseudo-spectral machinery on the torus [0, 2pi)^2.

mod field;
mod grid;
pub mod norms;
pub mod ops;
pub mod random;

pub use field::{Representation, ScalarField, VectorField};
pub use grid::Grid;
pub use ops::Axis;
