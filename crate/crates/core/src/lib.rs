//! Exact cnoidal and solitary traveling waves of the coupled
//! Schrödinger–KdV/BBM systems, with residual verification and a
//! pseudo-spectral propagation harness.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod model;
pub mod simulate;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
