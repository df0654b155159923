//! Simulation and exact verification of the H–S–H amplitude-doubling circuit
//! for the Partition Problem.
//!
//! The crate has two halves that are checked against each other:
//!
//! - exact Gaussian-integer formulas for the amplitudes of
//!   `H^n S^n H^n |0…0⟩` and for the residual amplitude of the solution
//!   states ([`closedform`]), backed by a brute-force summation oracle;
//! - a dense statevector simulator ([`statevector`]) that runs the full
//!   Partition Problem circuit built from the reversible oracle in
//!   [`partition`], driven end to end by [`circuit`].
//!
//! Qubit `j` is bit `j` of a basis index everywhere (qubit 0 is the least
//! significant bit).

pub mod bitmath;
pub mod circuit;
pub mod closedform;
pub mod error;
pub mod partition;
pub mod statevector;

pub use bitmath::{BitString, GaussianInt};
pub use circuit::{CircuitResult, Mode, SolutionDiagnostics};
pub use error::{Error, Result};
pub use partition::{PartitionInstance, RegisterLayout};
pub use statevector::StateVector;
