//! Minimum mean p-th error (MMPE) estimation for the additive white Gaussian
//! noise channel `Y = √snr·X + Z`.
//!
//! The crate evaluates `mmpe(X, snr, p)`, the optimal estimators behind it,
//! a catalog of upper and lower bounds, and information-theoretic quantities
//! derived from them.
//!
//! ```
//! use mmpe::{engine, model::InputDistribution};
//! let bpsk = InputDistribution::bpsk();
//! let e = engine::mmpe_scalar(&bpsk, 1.0, 2.0).unwrap();
//! assert!(e.value > 0.0 && e.value < 1.0);
//! ```

pub mod error;
pub mod specfun;
pub mod quad;
pub mod optimize;
pub mod model;
pub mod estimators;
pub mod engine;
pub mod bounds;
pub mod infometrics;
pub mod table;
pub mod presets;
pub mod figures;
pub mod verify;

pub use error::{MmpeError, Result};
