//! Entanglement dynamics of two two-level atoms in a two-mode, two-photon
//! Tavis-Cummings cavity with dipole-dipole coupling.
//!
//! Atom-atom concurrence is computed along two independent routes:
//!
//! * the **oracle** route builds the Hamiltonian on a truncated Fock basis,
//!   diagonalises it with a cyclic Jacobi solver and propagates exactly;
//! * the **analytic** route evaluates closed-form amplitudes for the two
//!   initial-state families (`Psi`: `cos α|eg⟩ + sin α|ge⟩`, `Phi`:
//!   `cos α|ee⟩ + sin α|gg⟩`, both with the field in vacuum).
//!
//! Time is dimensionless everywhere: `T = g·t`.
//!
//! The `parallel` feature (on by default) lets grid evaluations and sweeps
//! run on rayon; with it disabled every [`Execution`] runs sequentially.

pub mod analysis;
pub mod analytic;
pub mod commands;
pub mod config;
pub mod entanglement;
mod error;
mod exec;
pub mod hamiltonian;
pub mod linalg;
pub mod model;
pub mod output;
pub mod propagator;

pub use error::{Error, Result};
pub use exec::Execution;

pub use num_complex::Complex64;
