//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

/// Errors produced by the numerical and algebraic routines.
///
/// The variants separate caller mistakes (`Domain`, `NoIntertwiner`) from
/// analytic obstructions (`Resonance`), runtime numerical failures
/// (`Numerical`), and violated internal consistency checks (`Internal`).
/// Consistency failures indicate a bug or corrupted data, never bad input.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Input outside the documented domain of an operation.
    Domain(String),
    /// The requested intertwiner space is zero-dimensional.
    NoIntertwiner(String),
    /// The deformation parameter admits exponent differences in `ℤ\{0}`,
    /// so the series/transport machinery refuses to run.
    Resonance(String),
    /// An integrator or series evaluation failed to reach its tolerance.
    Numerical(String),
    /// A built-in cross-check failed; the result cannot be trusted.
    Internal(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Domain(msg) => write!(f, "domain error: {msg}"),
            CoreError::NoIntertwiner(msg) => write!(f, "no intertwiner: {msg}"),
            CoreError::Resonance(msg) => write!(f, "resonant parameter: {msg}"),
            CoreError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            CoreError::Internal(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl core::error::Error for CoreError {}
