use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::resample::PowerPoint;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or violated precondition.
    Input,
    /// The N* search could not bracket the target within its budget.
    Search,
    /// A numerical routine failed to converge or produced a non-finite value.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("replicate {index} failed: {source}")]
    Replicate { index: u64, source: Box<Error> },

    #[error("{failed} of {total} replicates failed (limit 1%); first failure: {first}")]
    TooManyFailures {
        failed: u64,
        total: u64,
        first: Box<Error>,
    },

    #[error("search budget exhausted: {message}")]
    Budget {
        message: String,
        curve: Vec<PowerPoint>,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) | Error::Degenerate(_) => ErrorKind::Input,
            Error::Replicate { source, .. } => source.kind(),
            Error::TooManyFailures { first, .. } => first.kind(),
            Error::Budget { .. } => ErrorKind::Search,
            Error::Numeric(_) => ErrorKind::Numeric,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
