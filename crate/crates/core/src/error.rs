use alloc::string::String;

use crate::pddl::ParseError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("scenario generation failed after {attempts} attempts")]
    Generation { attempts: usize },
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no plan skeleton reaches the goal within {max_len} steps")]
    Unsolvable { max_len: usize },
    #[error("timed out after {elapsed_ms} ms without an incumbent")]
    Timeout { elapsed_ms: u64 },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }
}
