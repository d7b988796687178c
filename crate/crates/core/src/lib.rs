//! Regularized empirical risk minimization with GD, SGD and SVRG, together with
//! stability-based generalization bounds evaluated alongside real training runs.
//!
//! The crate is organised bottom-up:
//!
//! - [`data`]: datasets, synthetic generators, libsvm ingestion and seeded splitting.
//! - [`model`]: linear and one-hidden-layer MLP models with exact gradients.
//! - [`objective`]: the regularized objective `(1/n) Σ l(w, z_i) + λ‖w‖²` and its
//!   smoothness / strong-convexity constants.
//! - [`optim`]: the three first-order methods and their metric traces.
//! - [`bounds`]: stability constants, convergence errors and the generalization bounds.
//! - [`harness`]: reference oracles, experiment configuration, artifacts and comparison.
//!
//! The `examples/` directory contains one runnable program per capability.

pub mod bounds;
pub mod data;
mod error;
pub mod harness;
pub mod model;
pub mod objective;
pub mod optim;
mod params;

pub use error::{Error, Result};
pub use params::ParameterVector;
