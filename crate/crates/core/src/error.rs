//! Error type shared by every solver in the crate.

use alloc::string::String;
use core::fmt;

/// Failure modes of the numerical routines.
///
/// `Input` means the caller handed over parameters or data that violate a
/// documented precondition. `Accuracy` means an iterative or adaptive method
/// exhausted its budget before reaching the requested tolerance; the payload
/// carries the best estimate so callers can decide whether it is usable.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on arguments or input data was violated.
    Input(String),
    /// A bracketing or sign-change precondition failed in a root search.
    Bracket { lo: f64, hi: f64 },
    /// An adaptive method ran out of budget. `estimate` is the best value
    /// reached, `error_bound` the estimated error at that point.
    Accuracy { estimate: f64, error_bound: f64 },
    /// An iteration hit its cap without meeting its convergence test.
    NoConvergence { iterations: usize, last_change: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Bracket { lo, hi } => {
                write!(f, "no sign change on [{lo}, {hi}]")
            }
            Error::Accuracy {
                estimate,
                error_bound,
            } => write!(
                f,
                "accuracy budget exhausted: estimate {estimate}, error bound {error_bound}"
            ),
            Error::NoConvergence {
                iterations,
                last_change,
            } => write!(
                f,
                "no convergence after {iterations} iterations (last change {last_change})"
            ),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub fn input(msg: impl fmt::Display) -> Self {
        Error::Input(alloc::format!("{msg}"))
    }
}
