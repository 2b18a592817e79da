//! Constrained Hamiltonian mechanics, truncated Fock-space open-system
//! dynamics, and the bracket/dissipator correspondence on coupled oscillators.
//!
//! Units: ħ = 1 and unit masses throughout. Tensor products order the system
//! mode first and the bath mode second.

pub mod coarse_grain;
pub mod correspondence;
pub mod error;
pub mod fock;
pub mod lindblad;
pub mod linalg;
pub mod poly_mech;

pub use error::{Error, Result};
