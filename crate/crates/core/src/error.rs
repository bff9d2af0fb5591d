use alloc::boxed::Box;
use alloc::string::String;

use crate::beam::PrecoderSolution;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("position ({x}, {y}) lies outside the map area")]
    OutsideArea { x: f64, y: f64 },

    #[error("codebook is empty")]
    EmptyCodebook,

    #[error("{0} list is empty")]
    EmptyList(&'static str),

    #[error("grid search needs {needed} candidate tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("precoder solver did not converge within {iterations} Newton iterations")]
    NotConverged {
        iterations: usize,
        best: Option<Box<PrecoderSolution>>,
    },

    #[error("no feasible precoder for M = {m}: {reason}")]
    InfeasiblePoint { m: usize, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `ok`.
pub(crate) fn ensure(ok: bool, name: &'static str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(name, reason))
    }
}
