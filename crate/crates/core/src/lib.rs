//! Dissipative dynamics of a classically driven two-level atom coupled to a
//! coherent cavity mode in the dispersive regime.
//!
//! The crate has two independent routes to the same physics:
//!
//! - [`analytic`]: closed-form evolution of the atom–field state, the
//!   decoherence factor `f(t)`, concurrence, linear entropy and photon number.
//! - [`liouville`]: a truncated Fock-space oracle that integrates the Lindblad
//!   master equation with an adaptive Runge–Kutta scheme and checks the
//!   superoperator disentangling identities against dense matrix exponentials.
//!
//! [`model`] derives the rotating-frame and dressed-state parameters from the
//! physical inputs, and [`entanglement`] implements the Wootters concurrence and
//! linear entropy for arbitrary two-qubit density matrices.
//!
//! The crate is `no_std` compatible (it needs `alloc`). The dense-exponential
//! oracle and the disentangling verifier require the default `std` feature.
//!
//! Units: ħ = 1 throughout.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analytic;
pub mod entanglement;
mod error;
pub mod liouville;
pub mod model;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dynamically sized complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dynamically sized complex column vector.
pub type CVector = nalgebra::DVector<C64>;
