//! Numerical laboratory for von Neumann-style quantum phase estimation on
//! block-encoded Hamiltonians.
//!
//! The pipeline runs from a Pauli-sum Hamiltonian through an LCU
//! block-encoding, qubitization, quantum eigenvalue transformation (QET)
//! Hamiltonian simulation and a pointer-register readout. Every approximate
//! stage has an exact dense-matrix oracle next to it, in [`numerics`].

pub mod blockenc;
pub mod error;
pub mod numerics;
pub mod pauli;
pub mod qet;
pub mod resources;
pub mod vnqpe;

pub use error::{Error, Result};
pub use num_complex::Complex64;
