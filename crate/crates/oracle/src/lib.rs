//! Brute-force reference for the chain spectroscopy engine: dense `2^M`
//! diagonalization of the site-basis Hamiltonian, exact dipole matrix
//! elements, parity and momentum quantum numbers, and fermion-space
//! constructions of the sector vacua and quasiparticle operators.
//!
//! Everything here is exponential in `M` and capped at `M = 12`; the point is
//! validation of the polynomial pipeline in `kmm-core`, not production use.

mod dense;
pub mod eigen;
pub mod fock;
pub mod report;

pub use dense::{
    analytic_level_enumeration, build_hamiltonian, commutator_checks, group_by_energy,
    hl_reference, parity_selection_residual, DenseSpectrum, DipoleLine, HlReference,
    ORACLE_M_CAP,
};
