//! Low-lying levels and tunneling splittings of one-dimensional double wells.

pub mod algebra;
pub mod error;
pub mod hj;
pub mod models;
pub mod numeric;
pub mod oracle;
pub mod potential;
pub mod splitting;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
