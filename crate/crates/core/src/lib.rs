//! Simulation and verification toolkit for massive stochastic nonlinear heat
//! equations driven by space-time white noise on a periodic lattice.

pub mod analysis;
pub mod error;
pub mod estimators;
pub mod grid;
pub mod io;
pub mod nonlinearity;
pub mod oracle;
pub mod par;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Field, GridSpec, NoiseField};
pub use nonlinearity::Nonlinearity;
pub use par::ExecMode;
