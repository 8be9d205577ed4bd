//! Numerical toolkit for relativistic quantum optics with satellites.
//!
//! Each module covers one family of predictions: event geometry for
//! long-baseline Bell tests, photon polarization under boosts and
//! gravitomagnetism, gravitational interferometry, non-inertial quantum
//! field effects, Lorentz-invariant polarization diffusion, CHSH statistics
//! and Keplerian orbits. [`scenario`] ties them together behind a config
//! file and the `qsat` command-line tool.

pub mod bell;
pub mod diffusion;
pub mod error;
pub mod gravitomagnetism;
pub mod interferometry;
pub mod kinematics;
pub mod lorentz;
pub mod orbits;
pub mod qft;
pub mod scenario;
pub mod units;
pub mod wigner;

pub use error::{Error, Result};
