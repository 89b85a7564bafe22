//! Desk-scale simulator for quantum annealing of lattice bosons whose
//! long-range interactions are mediated by two lossy cavity modes.
//!
//! Three levels of description of the same annealing protocol are built from
//! one linear-algebra substrate:
//!
//! - `full`: atoms and both photon modes as quantum degrees of freedom,
//! - `adiabatic`: cavity fields eliminated into an effective atomic
//!   interaction,
//! - `semiclassical`: cavity fields as self-consistent c-number amplitudes
//!   (no atom-field entanglement by construction).
//!
//! The crate exposes spectra along the pump ramp, time-dependent Schr\u{f6}dinger
//! evolution with fidelity/occupation/photon/entropy tracking, and parameter
//! sweep harnesses (ramp-time scans, U-V phase diagrams, photon-cutoff
//! studies). See the runnable programs under `examples/` for one entry point
//! per capability, or the `cavity-anneal` binary for the same via subcommands.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod hamiltonians;
mod linalg;
pub mod observables;
pub mod spectrum;
pub mod sweeps;

pub use error::{Error, Result};
pub use fockspace::{
    embed, BasisKind, CompositeBasis, DensityMatrix, FockBasis, Ladder, QOperator, StateVector,
};
pub use hamiltonians::{AnnealParams, Model, ScatteringOps};
