//! Time-optimal quantum evolution for two-level Hamiltonians.
//!
//! The crate covers the Hermitian brachistochrone (Fubini–Study geometry,
//! optimal Hamiltonian synthesis, minimum times), the PT-symmetric 2×2
//! family with its `C` operator and CPT inner product, a 4-dimensional
//! unitary dilation of the PT-symmetric dynamics, and complex classical
//! orbits of the harmonic oscillator.
//!
//! Every time-dependent routine takes `hbar` explicitly; [`DEFAULT_HBAR`]
//! is the conventional value of 1.

pub mod classical;
pub mod dilation;
pub mod error;
pub mod hermitian;
pub mod linalg;
pub mod pt;
pub mod sample;

pub use error::{Error, Result};
pub use linalg::{
    ComplexMatrix2, ComplexMatrix4, ComplexScalar, PauliDecomposition, StateVector, StateVector4,
};

/// Default value of the reduced Planck constant.
pub const DEFAULT_HBAR: f64 = 1.0;
