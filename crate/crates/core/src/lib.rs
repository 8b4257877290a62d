//! Reaction-coordinate mapping benchmark for harmonic networks: global
//! master-equation steady states and dynamics, exact quantum-Langevin
//! steady states, and Gaussian-state fidelity between the two.

pub mod bench;
pub mod currents;
pub mod error;
pub mod gaussian;
pub mod gkls;
pub mod network;
pub mod qle;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
