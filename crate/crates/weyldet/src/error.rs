//! Crate-wide error type.
//!
//! Misuse of arithmetic preconditions (mismatched variable counts, ragged
//! rows) panics, like indexing out of bounds would; everything that can fail
//! on honest input — division that does not come out even, an Ore search that
//! exhausts its degree budget, unparseable text — is reported through
//! [`Error`].

use std::fmt;

/// Alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An exact division was requested but the divisor does not divide the
    /// dividend in the symbol ring.
    NotDivisible,
    /// Division by the zero polynomial.
    DivisionByZero,
    /// An operation required a nonzero operand.
    ZeroInput,
    /// The Ore search reached `max_bound` without finding a common multiple.
    BoundExceeded { max_bound: u32 },
    /// A determinant of a triangular matrix was requested for a matrix that
    /// is not triangular.
    NotTriangular,
    /// Two matrices that should have the same size do not.
    SizeMismatch { left: usize, right: usize },
    /// Two operands built over different numbers of variables were combined.
    IndexMismatch { left: usize, right: usize },
    /// An elementary-matrix descriptor has an out-of-range or diagonal
    /// (row, col) position.
    BadIndices { row: usize, col: usize, size: usize },
    /// The engine derived something that its own invariants rule out; this is
    /// a bug, never a property of the input.
    InternalInconsistency(String),
    /// Malformed expression text. `position` is the 1-based byte offset of
    /// the offending character.
    Syntax { position: usize, message: String },
    /// A generator index outside `1..=m`, e.g. `x3` with `m = 2`.
    IndexOutOfRange { name: String, max: usize },
    /// A matrix document that is not valid JSON or lacks the required fields.
    Format(String),
    /// A matrix document whose declared dimensions disagree with its entries.
    Dimension(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotDivisible => write!(f, "exact division failed: not divisible"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroInput => write!(f, "operand must be nonzero"),
            Error::BoundExceeded { max_bound } => {
                write!(f, "no common multiple found up to degree bound {max_bound}")
            }
            Error::NotTriangular => write!(f, "matrix is not triangular"),
            Error::SizeMismatch { left, right } => {
                write!(f, "matrix size mismatch: {left} vs {right}")
            }
            Error::IndexMismatch { left, right } => {
                write!(f, "variable count mismatch: m = {left} vs m = {right}")
            }
            Error::BadIndices { row, col, size } => {
                write!(f, "bad elementary position ({row}, {col}) for size {size}")
            }
            Error::InternalInconsistency(what) => {
                write!(f, "internal inconsistency: {what}")
            }
            Error::Syntax { position, message } => {
                write!(f, "syntax error at byte {position}: {message}")
            }
            Error::IndexOutOfRange { name, max } => {
                write!(f, "generator {name} out of range (have 1..={max})")
            }
            Error::Format(message) => write!(f, "bad matrix document: {message}"),
            Error::Dimension(message) => write!(f, "bad matrix dimensions: {message}"),
        }
    }
}

impl std::error::Error for Error {}
