//! Exact non-equilibrium steady-state transport for quantum wire junctions
//! modeled as star graphs: scattering matrices for all self-adjoint point-like
//! vertex interactions, Landauer-Büttiker currents, charge/energy density
//! profiles with Friedel oscillations, heat flow and zero-frequency noise, for
//! both Schrödinger (Fermi/Bose) and massless Dirac dynamics.
//!
//! Units: hbar = k_B = 1 throughout. Temperatures are energies, distances are
//! inverse momenta.

pub mod config;
pub mod dirac;
pub mod error;
pub mod linalg;
pub mod numerics;
pub mod observable;
pub mod reservoir;
pub mod run;
pub mod schrodinger;
pub mod sweep;
pub mod table;
pub mod vertex;

pub use error::{Error, Result};
