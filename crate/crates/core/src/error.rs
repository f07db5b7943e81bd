use core::fmt;

/// Errors surfaced at the crate API boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Model parameters violate an invariant (`ε > 0`, `b ≤ 0`, `M ≥ 2`).
    InvalidParams(&'static str),
    /// An operation was called outside its coupling regime
    /// (e.g. a weak-coupling quantity requested at `B ≥ 1`).
    WrongRegime { required: &'static str, b_ratio: f64 },
    /// Closed form diverges or vanishes exactly at the critical point.
    CriticalPoint(&'static str),
    /// A wavenumber argument is not on the expected grid.
    OffGrid(&'static str),
    /// Wrong excitation-count parity for a matrix-element request.
    BadExcitationCount { expected: &'static str, got: usize },
    /// The kernel linear system is numerically singular. This signals a grid
    /// or branch bug, not a physical degeneracy.
    SingularSystem { condition: f64 },
    /// Enumeration over a manifold would exceed the combinatorial budget.
    BudgetExceeded { tuples: u128, limit: u128 },
    /// Adaptive quadrature failed to reach the requested tolerance.
    QuadratureFailure(&'static str),
    /// Molecule parameters are outside the validity domain of the mapping.
    InvalidMolecule(&'static str),
}

impl core::error::Error for Error {}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid model parameters: {msg}"),
            Error::WrongRegime { required, b_ratio } => {
                write!(f, "operation requires {required} (got B = {b_ratio})")
            }
            Error::CriticalPoint(msg) => write!(f, "critical point B = 1: {msg}"),
            Error::OffGrid(msg) => write!(f, "wavenumber not on expected grid: {msg}"),
            Error::BadExcitationCount { expected, got } => {
                write!(f, "expected {expected} wavenumbers, got {got}")
            }
            Error::SingularSystem { condition } => {
                write!(f, "singular kernel system (condition estimate {condition:e})")
            }
            Error::BudgetExceeded { tuples, limit } => {
                write!(f, "manifold enumeration of {tuples} tuples exceeds budget {limit}")
            }
            Error::QuadratureFailure(msg) => write!(f, "quadrature failure: {msg}"),
            Error::InvalidMolecule(msg) => write!(f, "invalid molecule parameters: {msg}"),
        }
    }
}
