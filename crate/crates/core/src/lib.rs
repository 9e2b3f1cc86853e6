//! Pseudo-spectral solver and convergence harness for the rotating,
//! variable-density incompressible Navier-Stokes equations on the torus,
//! together with the solvers and diagnostics for their fast-rotation limits.

pub mod error;
pub mod fit;
pub mod harness;
pub mod io;
mod kernel;
pub mod limit;
pub mod littlewood_paley;
pub mod nsc;
pub mod spectral;
pub mod windows;

pub use error::{Error, Result};
