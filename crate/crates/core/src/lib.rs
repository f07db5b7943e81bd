//! Exact linear spectroscopy of a periodic chain of `M` dipole-coupled
//! two-level systems.
//!
//! The chain Hamiltonian (nearest-neighbour dipole coupling `b < 0`, site
//! excitation energy `ε`) is equivalent to a transverse-field Ising chain and
//! is diagonalized by free fermions on two wavenumber grids: a periodic grid
//! (`α`, odd fermion-parity sector) and an antiperiodic grid (`β`, even
//! sector). On top of the mode structure this crate computes transition
//! dipole matrix elements through a generalized Wick theorem — an `M × M`
//! complex linear solve plus Pfaffian recursions — in `O(M³)` total, instead
//! of the `O(2^{3M})` cost of diagonalizing the full chain.
//!
//! Everything here is `no_std + alloc`: pure, deterministic numerics with no
//! IO. File formats, the CLI, and the brute-force validation oracle live in
//! companion crates.
//!
//! Module map:
//! - [`model`]: parameters, wavenumber grids, dispersions, Bogoliubov angles,
//!   ground-state energies, and the finite-size gap (mode sum and contour
//!   integral).
//! - [`wick`]: contraction coefficients, the kernel linear systems, Pfaffian
//!   matrix elements, and ground-state overlap.
//! - [`spectra`]: oscillator strengths, manifold contributions, absorption
//!   density grids, and dipole correlation functions.
//! - [`emulator`]: cold-molecule lattice parameters mapped onto chain
//!   parameters and superradiant decay rates.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod emulator;
mod error;
pub(crate) mod linalg;
pub(crate) mod math;
pub mod model;
pub mod quad;
pub mod spectra;
pub mod wick;

pub use error::Error;
pub use num_complex::Complex64 as C64;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
