//! Conditional variance and entropic uncertainty relations on the thermal
//! two-qubit Heisenberg model with Dzyaloshinskii-Moriya interaction.

pub mod dm_model;
pub mod error;
pub mod kernel;
pub mod measurement;
pub mod random;
pub mod relations;
pub mod state;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{ComplexMatrix, C64};
