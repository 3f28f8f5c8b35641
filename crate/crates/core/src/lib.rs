//! Drop-push percolation on a ring: simulation, exact oracles and limit theory.

pub mod coalescent;
pub mod error;
pub mod exact;
pub mod harness;
pub mod law;
pub mod oracle;
pub mod ring;
pub mod rng;
pub mod theory;
pub mod walk;

pub use error::{Error, Result};
