//! Crate-wide error type.
//!
//! One flat enum instead of per-module error types: callers (the CLI and the
//! test suites) mostly care about the coarse class — bad input, numerically
//! singular object, contract violation, internal inconsistency — and the
//! message carries the specifics.

use std::fmt;

/// Errors reported by flaglab operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A weight sequence is unusable: non-positive or non-finite values,
    /// empty tables, bad extrapolation parameters.
    InvalidWeight(String),
    /// A series parameter is outside its admissible range (e.g. a Moebius
    /// parameter with |a| above the configured cap, a Blaschke zero outside
    /// the open disk).
    InvalidSymbol(String),
    /// A series operation needs a nonzero constant term (reciprocal,
    /// division) and the symbol vanishes at the origin.
    SingularSymbol(String),
    /// An operation was called outside its documented preconditions
    /// (missing tail bound, truncation size too small, shape mismatch, ...).
    Contract(String),
    /// A matrix inverse was requested but the smallest singular value is
    /// below the relative threshold.
    SingularMatrix { smallest: f64, largest: f64 },
    /// A functional-calculus power series cannot converge on the truncation:
    /// `|T| * r >= 1` for the symbol's certified tail ratio `r`.
    Divergence { norm: f64, ratio: f64 },
    /// No obstruction certificate exists (the symbol `h` is identically
    /// zero, so the Sylvester family is unobstructed).
    NoObstruction,
    /// A cross-check that must hold by construction failed; indicates a bug
    /// or a numerically hostile input, never a property of the mathematics.
    InternalConsistency(String),
    /// Configuration file or CLI argument errors.
    Config(String),
    /// Filesystem errors while writing outputs.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWeight(msg) => write!(f, "invalid weight: {msg}"),
            Error::InvalidSymbol(msg) => write!(f, "invalid symbol: {msg}"),
            Error::SingularSymbol(msg) => write!(f, "singular symbol: {msg}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::SingularMatrix { smallest, largest } => write!(
                f,
                "singular matrix: smallest singular value {smallest:.3e} below relative \
                 threshold (largest {largest:.3e})"
            ),
            Error::Divergence { norm, ratio } => write!(
                f,
                "series calculus diverges on this truncation: |T| = {norm:.6} with tail \
                 ratio r = {ratio:.6} gives |T|*r >= 1"
            ),
            Error::NoObstruction => {
                write!(f, "no obstruction: the symbol h is identically zero")
            }
            Error::InternalConsistency(msg) => {
                write!(f, "internal consistency check failed: {msg}")
            }
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
