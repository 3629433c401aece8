//! Error type shared by every module in the crate.

use thiserror::Error;

/// All failure modes surfaced by the library.
///
/// Operations that take elements from two different coefficient rings report
/// `RingMismatch` rather than coercing; nothing in this crate ever converts
/// between rings implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unsupported ring for this operation: {0}")]
    UnsupportedRing(String),

    #[error("division by zero or non-invertible element: {0}")]
    NotInvertible(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown basis key: {0}")]
    UnknownBasisKey(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("input is not homogeneous: degrees {0} and {1} both present")]
    NonHomogeneousInput(usize, usize),

    #[error("not a Lie algebra: {0}")]
    NotALieAlgebra(String),

    #[error("not an S-module action: {0}")]
    NotAnSModule(String),

    #[error("not equivariant: {0}")]
    NotEquivariant(String),

    #[error("symmetry violation while building Phi on {monomial}: orderings disagree by {difference}")]
    SymmetryViolation { monomial: String, difference: String },

    #[error("cap exceeded: size {got} > cap {cap}")]
    CapExceeded { got: usize, cap: usize },

    #[error("not a twisted pre-Lie structure: {0}")]
    NotTwistedPreLie(String),

    #[error("prime too large: p = {0} exceeds the supported bound {1}")]
    PrimeTooLarge(u64, u64),

    #[error("block size mismatch: {0}")]
    SizeMismatch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Shorthand used by parsers; input is treated as a single line unless it
    /// contains newlines.
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::SyntaxError { line, column, message: message.into() }
    }
}
