//! Learning qubit rotations about an unknown axis stored in a spin-j memory.

pub mod channel_core;
pub mod cli;
pub mod error;
pub mod heisenberg;
pub mod memory_dynamics;
pub mod mo_benchmark;
pub(crate) mod numerics;
pub mod quantum_optimal;
pub mod spin_algebra;
pub mod tolerance;

pub use error::{Error, Result};
