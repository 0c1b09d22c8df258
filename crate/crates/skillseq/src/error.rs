use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Errors surfaced by the IO layer and the CLI. Each class maps to its own
/// process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Format { path: String, line: usize, message: String },
    #[error("solver error: {0}")]
    Solver(skillseq_core::Error),
}

impl CliError {
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_IO: i32 = 3;
    pub const EXIT_FORMAT: i32 = 4;
    pub const EXIT_SOLVER: i32 = 5;

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Self::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn format(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Self::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => Self::EXIT_CONFIG,
            Self::Io { .. } => Self::EXIT_IO,
            Self::Format { .. } => Self::EXIT_FORMAT,
            Self::Solver(_) => Self::EXIT_SOLVER,
        }
    }
}

impl From<skillseq_core::Error> for CliError {
    fn from(e: skillseq_core::Error) -> Self {
        use skillseq_core::Error as E;
        match e {
            E::Configuration(msg) => Self::Config(msg),
            E::Parse(p) => Self::format("<pddl>", 0, p.to_string()),
            other => Self::Solver(other),
        }
    }
}

pub(crate) fn read_to_string(path: impl AsRef<Path>) -> Result<String> {
    std::fs::read_to_string(path.as_ref()).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_file(path: impl AsRef<Path>, contents: impl AsRef<[u8]>) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
