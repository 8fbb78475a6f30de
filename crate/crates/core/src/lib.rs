//! Density-matrix simulation of two-qubit entanglement teleportation through
//! Werner-state channels, with closed-form predictions for fidelity, replica
//! entanglement and correlation-information transfer.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, Kronecker products, partial trace and
//!   transpose, Hermitian eigenvalues.
//! - [`states`]: Werner channels, pure inputs, Bloch representation.
//! - [`measures`]: entanglement, information measures, fidelity, purity.
//! - [`teleport`]: the Bell-measurement protocol and its Bloch contraction.
//! - [`formulas`]: closed-form laws.
//! - [`sweep`]: grid generation and CSV/JSON emission behind the CLI.

pub mod error;
pub mod formulas;
pub mod linalg;
pub mod measures;
pub mod states;
pub mod sweep;
pub mod teleport;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, QubitIndexMap};
pub use states::{BlochRep, DensityMatrix, PureState, Side, WernerChannel};
