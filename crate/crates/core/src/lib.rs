//! Discrete Wigner functions on the odd-dimensional phase space `Z_d × Z_d`,
//! line-sum tomography over that grid, and sparse reconstruction of the
//! grid from a random subset of line measurements by linearized Bregman
//! iteration.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the tolerances in
//! the test suite are stated for.

pub mod cli;
pub mod error;
pub mod io_metrics;
pub mod phase_space;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use phase_space::{DensityMatrix, Dimension, DiscreteWigner};
pub use scalar::Real;

pub type Density = phase_space::DensityMatrix<f64>;
pub type Wigner = phase_space::DiscreteWigner<f64>;
pub type CoherentParams = states::CoherentStateParams<f64>;
pub type FullMatrix = tomography::MeasurementMatrix<f64>;
pub type Sensing = tomography::SensingMatrix<f64>;
pub type Measurements = tomography::MeasurementVector<f64>;
pub type Basis = solver::SparseBasis<f64>;
pub type Bregman = solver::BregmanConfig<f64>;
pub type Report = solver::ReconstructionReport<f64>;
pub type Metrics = io_metrics::GridMetrics<f64>;

pub type Density32 = phase_space::DensityMatrix<f32>;
pub type Wigner32 = phase_space::DiscreteWigner<f32>;
